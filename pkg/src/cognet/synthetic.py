"""Synthetic cognate family for demos and end-to-end tests.

One proto-word is drawn per concept and evolved into each daughter
language by a fixed per-language subset of three feature-level sound
changes (devoicing, spirantization of voiceless stops, final vowel loss).
A seeded fraction of slots is replaced by unrelated filler words, giving
each concept a mix of one cognate class and singleton non-cognates.
"""

from __future__ import annotations

import random

from .phoneme import parse_word
from .wordlists import Lexeme, write_wordlist

DEVOICE = str.maketrans("bdgzvZGj", "ptksfSqC")
SPIRANTIZE = str.maketrans("ptk", "fsx")
RAW_VOWELS = "aeiou"

_ONSETS = "ptkbdgszmnlrwfvhx"
_PATTERNS = ("CVCV", "CVC", "CVCVC", "CCVC", "CVCCV")


def _random_word(rng: random.Random) -> str:
    pattern = rng.choice(_PATTERNS)
    return "".join(
        rng.choice(_ONSETS) if ch == "C" else rng.choice(RAW_VOWELS)
        for ch in pattern
    )


def _lose_final_vowel(word: str) -> str:
    if len(word) > 1 and word[-1] in RAW_VOWELS:
        return word[:-1]
    return word


def apply_changes(word: str, language_index: int) -> str:
    """Evolve a proto-word: rule subset selected by the index's low bits."""
    if language_index & 1:
        word = word.translate(DEVOICE)
    if language_index & 2:
        word = word.translate(SPIRANTIZE)
    if language_index & 4:
        word = _lose_final_vowel(word)
    return word


def generate_family(
    n_concepts: int = 30,
    n_languages: int = 8,
    filler_rate: float = 0.35,
    seed: int = 7,
    family: str = "synthetica",
) -> list[Lexeme]:
    """Raw-ASJP lexemes for a deterministic synthetic family."""
    rng = random.Random(seed)
    lexemes: list[Lexeme] = []
    for c in range(n_concepts):
        concept = f"c{c:03d}"
        proto = _random_word(rng)
        for lang in range(n_languages):
            language = f"L{lang}"
            if rng.random() < filler_rate:
                form = _random_word(rng)
                cognate_class = f"{concept}:f{lang}"
            else:
                form = apply_changes(proto, lang)
                cognate_class = f"{concept}:cog"
            lexemes.append(Lexeme(
                family=family,
                language=language,
                concept=concept,
                form=parse_word(form),
                cognate_class=cognate_class,
            ))
    return lexemes


def main(argv=None) -> int:
    import argparse

    parser = argparse.ArgumentParser(
        prog="python -m cognet.synthetic",
        description="Write a synthetic cognate word list as TSV.",
    )
    parser.add_argument("out", help="output TSV path")
    parser.add_argument("--concepts", type=int, default=30)
    parser.add_argument("--languages", type=int, default=8)
    parser.add_argument("--filler-rate", type=float, default=0.35)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)
    lexemes = generate_family(
        n_concepts=args.concepts,
        n_languages=args.languages,
        filler_rate=args.filler_rate,
        seed=args.seed,
    )
    write_wordlist(lexemes, args.out)
    print(f"wrote {len(lexemes)} lexemes to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
