import numpy as np

from cognet import phoneme, synthetic, wordlists


def test_generate_family_shape():
    lexemes = synthetic.generate_family(n_concepts=30, n_languages=8, seed=7)
    assert len(lexemes) == 240
    assert len({l.concept for l in lexemes}) == 30
    assert len({l.language for l in lexemes}) == 8
    for lex in lexemes:
        assert lex.form  # nonempty
        assert all(s in phoneme.SYMBOL_INDEX for s in lex.form)


def test_generate_family_is_deterministic():
    a = synthetic.generate_family(seed=3)
    b = synthetic.generate_family(seed=3)
    assert a == b
    c = synthetic.generate_family(seed=4)
    assert a != c


def test_sound_changes_are_featural():
    # devoicing maps voiced obstruents onto their voiceless partners
    assert synthetic.apply_changes("bad", 1) == "pat"
    # spirantization turns voiceless stops into fricatives
    assert synthetic.apply_changes("pat", 2) == "fas"
    # final vowel loss
    assert synthetic.apply_changes("pata", 4) == "pat"
    # rule stacking: devoice, then spirantize, then drop the final vowel
    assert synthetic.apply_changes("bada", 7) == "fas"
    # language 0 keeps the proto-form
    assert synthetic.apply_changes("bada", 0) == "bada"


def test_each_concept_mixes_cognates_and_fillers():
    lexemes = synthetic.generate_family(seed=7)
    pairs = wordlists.generate_pairs(lexemes)
    labels = np.array([p.label for p in pairs])
    assert 0.2 < labels.mean() < 0.6
    by_concept = {}
    for lex in lexemes:
        by_concept.setdefault(lex.concept, set()).add(lex.cognate_class)
    # most concepts have a cognate set plus at least one filler class
    with_fillers = sum(1 for classes in by_concept.values() if len(classes) > 1)
    assert with_fillers >= 20


def test_write_and_reload_family(tmp_path):
    lexemes = synthetic.generate_family(seed=7)
    path = tmp_path / "family.tsv"
    wordlists.write_wordlist(lexemes, path)
    assert wordlists.load_wordlist(path) == lexemes


def test_main_writes_file(tmp_path, capsys):
    out = tmp_path / "fam.tsv"
    assert synthetic.main([str(out), "--seed", "9", "--concepts", "5"]) == 0
    lexemes = wordlists.load_wordlist(out)
    assert len({l.concept for l in lexemes}) == 5
