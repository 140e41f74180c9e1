"""Command-line front end for featurization, training, and evaluation runs.

Subcommands: featurize, pmi-train, train, evaluate, pipeline.  Options can
come from an INI-style config file (``key = value`` under ``[section]``
headers) with command-line flags taking precedence.  Every run writes a
manifest (resolved options plus input digests) next to its outputs, and
all randomness flows from the single ``--seed``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import metrics, pmi, similarity, svm, wordlists
from .neural import model as neural_model
from .svm import decision_function, grid_search_cv

SYSTEMS = ("ortho_svm", "pmi_svm", "manhattan", "two_channel", "siamese_euclid")
NEURAL_SYSTEMS = ("manhattan", "two_channel", "siamese_euclid")

DATA_ERRORS = (
    OSError,
    wordlists.SchemaError,
    wordlists.OverlappingFamilies,
    wordlists.EmptySide,
    pmi.EmptySeedSet,
    neural_model.EmptyDataset,
    svm.TooFewSamples,
    svm.SingleClass,
    metrics.SingleClassLabels,
    metrics.NoPositives,
    ValueError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: Path, command: str, options: dict, inputs: list) -> None:
    manifest = {
        "command": command,
        "options": {k: v for k, v in sorted(options.items())},
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_config(path: str | None) -> dict[str, str]:
    """Flatten [section] key = value pairs into 'key' -> value."""
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise UsageError(f"bad config file {path}: {exc}") from exc
    if not read:
        raise UsageError(f"config file not found: {path}")
    flat: dict[str, str] = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            flat[key.replace("-", "_")] = value
    return flat


def _resolve(args: argparse.Namespace, config: dict[str, str], key: str, cast, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        try:
            return cast(config[key])
        except ValueError as exc:
            raise UsageError(f"config key {key!r}: {exc}") from exc
    return default


def _parse_kernel(text: str) -> tuple[int, int]:
    parts = text.lower().replace("x", ",").split(",")
    if len(parts) != 2:
        raise ValueError(f"kernel must look like '2x3', got {text!r}")
    return int(parts[0]), int(parts[1])


def _parse_grid(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _parse_families(text: str | None) -> set[str] | None:
    if text is None:
        return None
    return {f.strip() for f in text.split(",") if f.strip()}


def _kernel_type(text: str) -> tuple[int, int]:
    try:
        return _parse_kernel(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> _Parser:
    parser = _Parser(prog="cognet", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="INI config file with option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--data", help="word-list TSV")
        p.add_argument("--seed", type=int, help="master random seed")

    p_feat = sub.add_parser("featurize", help="write similarity features for all pairs")
    add_common(p_feat)
    p_feat.add_argument("--out", help="output TSV path")

    p_pmi = sub.add_parser("pmi-train", help="estimate a PMI matrix from word pairs")
    add_common(p_pmi)
    p_pmi.add_argument("--out", help="output matrix path")
    p_pmi.add_argument("--cutoff", type=float)
    p_pmi.add_argument("--max-iterations", type=int, dest="max_iterations")
    p_pmi.add_argument("--tol", type=float)
    p_pmi.add_argument("--pseudocount", type=float)
    p_pmi.add_argument("--gap-penalty", type=float, dest="gap_penalty")

    def add_train_options(p):
        p.add_argument("--system", choices=SYSTEMS)
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--epochs", type=int)
        p.add_argument("--batch-size", type=int, dest="batch_size")
        p.add_argument("--margin", type=float)
        p.add_argument("--kernel", type=_kernel_type)
        p.add_argument("--filters", type=int)
        p.add_argument("--fc-units", type=int, dest="fc_units")
        p.add_argument("--dropout", type=float)
        p.add_argument("--pad-len", type=int, dest="pad_len")
        p.add_argument("--c-grid", dest="c_grid")
        p.add_argument("--folds", type=int)
        p.add_argument("--svm-passes", type=int, dest="svm_passes")
        p.add_argument("--pmi-matrix", dest="pmi_matrix", help="reuse a saved PMI matrix")

    p_train = sub.add_parser("train", help="train one system on every pair in the data")
    add_common(p_train)
    add_train_options(p_train)

    p_eval = sub.add_parser("evaluate", help="score a trained model on a word list")
    add_common(p_eval)
    p_eval.add_argument("--system", choices=SYSTEMS)
    p_eval.add_argument("--model", help="checkpoint (neural) or model file (svm)")
    p_eval.add_argument("--out-dir", dest="out_dir")
    p_eval.add_argument("--pmi-matrix", dest="pmi_matrix")
    p_eval.add_argument("--threshold", type=float)

    p_pipe = sub.add_parser("pipeline", help="split, train, and evaluate one system")
    add_common(p_pipe)
    add_train_options(p_pipe)
    p_pipe.add_argument("--mode", choices=("cross-concept", "cross-family"))
    p_pipe.add_argument("--train-fraction", type=float, dest="train_fraction")
    p_pipe.add_argument("--train-families", dest="train_families")
    p_pipe.add_argument("--test-families", dest="test_families")
    p_pipe.add_argument("--threshold", type=float)
    return parser


def _require(options: dict, *keys: str) -> None:
    missing = [k for k in keys if options.get(k) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + k.replace('_', '-') for k in missing)}")


def _load_pairs(options: dict) -> tuple[list[wordlists.Lexeme], list[wordlists.WordPair]]:
    lexemes = wordlists.load_wordlist(options["data"])
    pairs = wordlists.generate_pairs(lexemes)
    return lexemes, pairs


def _pair_columns(pair: wordlists.WordPair) -> list[str]:
    return [pair.family, pair.concept, pair.a.language, pair.a.form,
            pair.b.language, pair.b.form, str(pair.label)]


def cmd_featurize(options: dict) -> int:
    _require(options, "data", "out")
    _, pairs = _load_pairs(options)
    out = Path(options["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    header = ["family", "concept", "language_a", "form_a", "language_b", "form_b", "label"]
    header += list(similarity.FEATURE_NAMES)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("\t".join(header) + "\n")
        for pair in pairs:
            feats = similarity.extract_features(pair.a.form, pair.b.form)
            row = _pair_columns(pair) + [format(v, ".12g") for v in feats.vector()]
            fh.write("\t".join(row) + "\n")
    _write_manifest(out.parent, "featurize", options, [options["data"]])
    print(f"wrote {len(pairs)} feature rows to {out}")
    return 0


def _pmi_config(options: dict) -> pmi.PMIConfig:
    return pmi.PMIConfig(
        initial_cutoff=options["cutoff"],
        max_iterations=options["max_iterations"],
        convergence_tol=options["tol"],
        pseudocount=options["pseudocount"],
        gap_penalty=options["gap_penalty"],
    )


def cmd_pmi_train(options: dict) -> int:
    _require(options, "data", "out")
    _, pairs = _load_pairs(options)
    matrix = pmi.estimate_pmi([(p.a.form, p.b.form) for p in pairs], _pmi_config(options))
    out = Path(options["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    pmi.save_matrix(matrix, out)
    _write_manifest(out.parent, "pmi-train", options, [options["data"]])
    print(f"PMI matrix written to {out} "
          f"(iterations={matrix.iterations}, delta={matrix.final_delta:.3g}, "
          f"converged={matrix.converged})")
    return 0


def _model_spec(options: dict, architecture: str) -> neural_model.ModelSpec:
    return neural_model.ModelSpec(
        architecture=architecture,
        conv_filters=options["filters"],
        kernel=options["kernel"],
        fc_units=options["fc_units"],
        dropout_rate=options["dropout"],
        pad_len=options["pad_len"],
    )


def _train_system(options: dict, train_pairs: list[wordlists.WordPair], out_dir: Path):
    """Train the chosen system; returns (kind, artifacts dict)."""
    system = options["system"]
    seed = options["seed"]
    if system in NEURAL_SYSTEMS:
        spec = _model_spec(options, system)
        net = neural_model.build(spec, seed=seed)
        cfg = neural_model.TrainConfig(
            batch_size=options["batch_size"],
            epochs=options["epochs"],
            margin=options["margin"],
            seed=seed,
        )
        _, history = neural_model.train(net, train_pairs, cfg)
        neural_model.save_checkpoint(net, out_dir / "model.txt")
        with open(out_dir / "loss_history.tsv", "w", encoding="utf-8") as fh:
            fh.write("epoch\tmean_loss\n")
            for epoch, loss in enumerate(history, 1):
                fh.write(f"{epoch}\t{format(loss, '.12g')}\n")
        return {"net": net}

    if system == "pmi_svm":
        if options.get("pmi_matrix"):
            matrix = pmi.load_matrix(options["pmi_matrix"])
        else:
            matrix = pmi.estimate_pmi(
                [(p.a.form, p.b.form) for p in train_pairs], _pmi_config(options)
            )
        pmi.save_matrix(matrix, out_dir / "pmi_matrix.tsv")
        X = np.array([pmi.pmi_features(p.a.form, p.b.form, matrix) for p in train_pairs])
    else:  # ortho_svm
        matrix = None
        X = np.array([
            similarity.extract_features(p.a.form, p.b.form).vector()
            for p in train_pairs
        ])
    y = np.array([p.label for p in train_pairs])
    search = grid_search_cv(
        X, y, C_grid=options["c_grid"], folds=options["folds"],
        seed=seed, passes=options["svm_passes"],
    )
    fitted = svm.fit(X, y, C=search.best_C, seed=seed, passes=options["svm_passes"])
    svm.save_model(fitted, out_dir / "model.txt")
    with open(out_dir / "cv_results.tsv", "w", encoding="utf-8") as fh:
        fh.write("C\tmean_accuracy\n")
        for c in sorted(search.cv_scores):
            fh.write(f"{format(c, '.12g')}\t{format(search.cv_scores[c], '.12g')}\n")
    return {"svm": fitted, "pmi_matrix": matrix, "best_C": search.best_C}


def _score_pairs(options: dict, artifacts: dict, pairs: list[wordlists.WordPair]) -> np.ndarray:
    system = options["system"]
    if system in NEURAL_SYSTEMS:
        net = artifacts["net"]
        xa, xb, _ = neural_model.encode_pairs(pairs, net.spec.pad_len)
        return net.predict(xa, xb)
    if system == "pmi_svm":
        matrix = artifacts["pmi_matrix"]
        X = np.array([pmi.pmi_features(p.a.form, p.b.form, matrix) for p in pairs])
    else:
        X = np.array([
            similarity.extract_features(p.a.form, p.b.form).vector()
            for p in pairs
        ])
    return decision_function(artifacts["svm"], X)


def _default_threshold(system: str) -> float:
    # SVM scores are uncalibrated margins; split at zero
    return 0.0 if system.endswith("_svm") else 0.5


def _write_report(out_dir: Path, report: metrics.EvalReport, title: str) -> str:
    text = metrics.render_report(report, title=title)
    with open(out_dir / "report.txt", "w", encoding="utf-8") as fh:
        fh.write(text)
    with open(out_dir / "report.tsv", "w", encoding="utf-8") as fh:
        fh.write(metrics.report_tsv(report))
    return text


def cmd_train(options: dict) -> int:
    _require(options, "data", "system", "out_dir")
    _, pairs = _load_pairs(options)
    out_dir = Path(options["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    _train_system(options, pairs, out_dir)
    inputs = [options["data"]] + ([options["pmi_matrix"]] if options.get("pmi_matrix") else [])
    _write_manifest(out_dir, "train", options, inputs)
    print(f"trained {options['system']} on {len(pairs)} pairs; artifacts in {out_dir}")
    return 0


def cmd_evaluate(options: dict) -> int:
    _require(options, "data", "system", "model", "out_dir")
    system = options["system"]
    _, pairs = _load_pairs(options)
    out_dir = Path(options["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    if system in NEURAL_SYSTEMS:
        artifacts = {"net": neural_model.load_checkpoint(options["model"])}
    else:
        artifacts = {"svm": svm.load_model(options["model"])}
        if system == "pmi_svm":
            _require(options, "pmi_matrix")
            artifacts["pmi_matrix"] = pmi.load_matrix(options["pmi_matrix"])
    scores = _score_pairs(options, artifacts, pairs)
    threshold = options["threshold"] if options.get("threshold") is not None else _default_threshold(system)
    labels = np.array([p.label for p in pairs])
    report = metrics.evaluate(labels, scores, threshold=threshold)
    text = _write_report(out_dir, report, title=f"system: {system}")
    inputs = [options["data"], options["model"]]
    if options.get("pmi_matrix"):
        inputs.append(options["pmi_matrix"])
    _write_manifest(out_dir, "evaluate", options, inputs)
    print(text, end="")
    return 0


def cmd_pipeline(options: dict) -> int:
    _require(options, "data", "system", "out_dir", "mode")
    lexemes, pairs = _load_pairs(options)
    mode = wordlists.CROSS_CONCEPT if options["mode"] == "cross-concept" else wordlists.CROSS_FAMILY
    spec = wordlists.SplitSpec(
        mode=mode,
        train_fraction=options["train_fraction"],
        seed=options["seed"],
    )
    train_pairs, test_pairs = wordlists.split(
        pairs, lexemes, spec,
        train_families=_parse_families(options.get("train_families")),
        test_families=_parse_families(options.get("test_families")),
    )
    out_dir = Path(options["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts = _train_system(options, train_pairs, out_dir)
    scores = _score_pairs(options, artifacts, test_pairs)
    labels = np.array([p.label for p in test_pairs])
    threshold = options["threshold"] if options.get("threshold") is not None else _default_threshold(options["system"])
    report = metrics.evaluate(labels, scores, threshold=threshold)
    title = (f"system: {options['system']}  mode: {options['mode']}  "
             f"train pairs: {len(train_pairs)}  test pairs: {len(test_pairs)}")
    text = _write_report(out_dir, report, title=title)
    _write_manifest(out_dir, "pipeline", options, [options["data"]])
    print(text, end="")
    return 0


_DEFAULTS = {
    "seed": (int, None),  # mandatory, see run()
    "out": (str, None),
    "out_dir": (str, None),
    "data": (str, None),
    "system": (str, None),
    "model": (str, None),
    "mode": (str, None),
    "cutoff": (float, 0.5),
    "max_iterations": (int, 10),
    "tol": (float, 1e-4),
    "pseudocount": (float, 1.0),
    "gap_penalty": (float, -2.5),
    "epochs": (int, 20),
    "batch_size": (int, 128),
    "margin": (float, 1.0),
    "kernel": (_parse_kernel, (2, 3)),
    "filters": (int, 10),
    "fc_units": (int, 8),
    "dropout": (float, 0.5),
    "pad_len": (int, 10),
    "c_grid": (_parse_grid, (0.01, 0.1, 1.0, 10.0, 100.0)),
    "folds": (int, 10),
    "svm_passes": (int, 2000),
    "pmi_matrix": (str, None),
    "threshold": (float, None),
    "train_fraction": (float, 0.7),
    "train_families": (str, None),
    "test_families": (str, None),
}

_COMMANDS = {
    "featurize": cmd_featurize,
    "pmi-train": cmd_pmi_train,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "pipeline": cmd_pipeline,
}


def run(argv=None) -> int:
    """Parse arguments, dispatch, and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _load_config(args.config)
        options: dict = {}
        for key, (cast, default) in _DEFAULTS.items():
            options[key] = _resolve(args, config, key, cast, default)
        if isinstance(options.get("c_grid"), str):
            options["c_grid"] = _parse_grid(options["c_grid"])
        if isinstance(options.get("kernel"), str):
            options["kernel"] = _parse_kernel(options["kernel"])
        if options["seed"] is None:
            raise UsageError("a --seed is required (reproducibility contract)")
        return _COMMANDS[args.command](options)
    except UsageError as exc:
        print(f"cognet: usage error: {exc}", file=sys.stderr)
        return 1
    except DATA_ERRORS as exc:
        print(f"cognet: data error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
