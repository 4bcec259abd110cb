"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 data error. Diagnostics go to
stderr; results go to stdout unless ``--out`` names a file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bayes import NB_HEADER, dump_class_files, load_nb, save_nb, train_nb
from .corpus import LabeledDocument, SplitSpec, load_corpus, read_text
from .errors import ConfigError, DataError, ModelFormatError, MushannifError, UsageError
from .evaluation import (
    ClassifierSpec,
    PreprocessOptions,
    compare_classifiers,
    predict,
    resolve_preprocessor,
    run_experiment,
    train_classifier,
)
from .knn import KNN_HEADER, load_knn, save_knn
from .ngram import NGRAM_HEADER, load_ngram, save_ngram, save_profile
from .textproc import Preprocessor, parse_fingerprint, preprocess_corpus
from .vectorize import select_top_terms

DEFAULT_COMPARE = "nb,knn,ngram-manhattan,ngram-dice"


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    """Append ``(default: X)`` only where the help text doesn't already explain it."""

    def _get_help_string(self, action):
        text = action.help or ""
        if action.default is None or action.default is argparse.SUPPRESS or "default" in text:
            return text
        if action.required or isinstance(action.default, bool):
            return text
        return text + " (default: %(default)s)"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _profile_length(text: str):
    if text.lower() in ("none", "0", "unlimited"):
        return None
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer or 'none'")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("must lie strictly between 0 and 1")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("must be a 64-bit unsigned integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _preprocess_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("preprocessing (unset flags take the classifier's default)")
    g.add_argument("--profile", choices=["system", "khreisat"], default=None,
                   help="letter normalization profile (default: system for nb/knn, khreisat for ngram)")
    g.add_argument("--stem", action=argparse.BooleanOptionalAction, default=None,
                   help="light-stem tokens (default: on for nb/knn, off for ngram)")
    g.add_argument("--dedupe", action=argparse.BooleanOptionalAction, default=None,
                   help="keep only the first occurrence of each token (default: on for nb, off for knn/ngram)")
    g.add_argument("--stoplist", metavar="PATH", default=None, help="stop-word file (default: bundled list)")
    g.add_argument("--affixes", metavar="PATH", default=None, help="stemmer affix file (default: bundled tables)")
    g.add_argument("--min-stem-len", type=int, default=3, help="shortest stem the stemmer may leave")
    return p


def _classifier_parent(with_kind=True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("classifier")
    if with_kind:
        g.add_argument("--classifier", choices=["nb", "knn", "ngram"], default="nb", help="classifier family")
    g.add_argument("--alpha", type=float, default=1.0, help="nb: add-alpha smoothing constant")
    g.add_argument("--k", type=_positive, default=5, help="knn: number of neighbours")
    g.add_argument("--weighting", choices=["tf", "tfidf"], default="tfidf", help="knn: term weighting")
    g.add_argument("--measure", choices=["manhattan", "dice"], default="manhattan", help="ngram: profile measure")
    g.add_argument("--n", type=_positive, default=3, help="ngram: gram size in characters")
    g.add_argument("--L", type=_profile_length, default=300, help="ngram: profile length ('none' = unlimited)")
    return p


def _split_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("split")
    g.add_argument("--train-fraction", type=_fraction, default=0.4, help="share of each class used for training")
    g.add_argument("--seed", type=_seed, default=0, help="seed of the split permutation")
    return p


def _output_parent(formats=True, figures=False) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("output")
    g.add_argument("--out", metavar="PATH", default=None, help="write results here instead of stdout")
    if formats:
        g.add_argument("--format", choices=["tsv", "json"], default="tsv", help="report format")
    if figures:
        g.add_argument("--figures", metavar="DIR", default=None, help="also render PNG figures into DIR")
    return p


def build_parser() -> argparse.ArgumentParser:
    fmt = _HelpFormatter
    parser = _Parser(prog="mushannif", description="Arabic text classification toolkit.", formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND", parser_class=_Parser)
    pre = _preprocess_parent()

    p = sub.add_parser("preprocess", parents=[pre, _output_parent(formats=False)], formatter_class=fmt,
                       help="print the tokens of one file, one per line")
    p.add_argument("--input", required=True, metavar="FILE", help="UTF-8 text file")
    p.add_argument("--classifier", choices=["nb", "knn", "ngram"], default="nb",
                   help="whose preprocessing defaults to apply")

    p = sub.add_parser("train", parents=[pre, _classifier_parent()], formatter_class=fmt,
                       help="train a model on a corpus directory and save it")
    p.add_argument("--corpus", required=True, metavar="DIR", help="corpus root (one subdirectory per class)")
    p.add_argument("--model", required=True, metavar="PATH", help="model file to write")
    p.add_argument("--profiles-dir", metavar="DIR", default=None,
                   help="ngram: also write one profile file per class here")

    p = sub.add_parser("classify", parents=[pre, _output_parent(formats=False)], formatter_class=fmt,
                       help="classify a file or every file in a directory",
                       description="Unset preprocessing flags are taken from the chain recorded in the model.")
    p.add_argument("--model", required=True, metavar="PATH", help="model file written by 'train'")
    p.add_argument("--input", required=True, metavar="PATH", help="UTF-8 file or directory of files")
    p.add_argument("--k", type=_positive, default=5, help="knn: number of neighbours")
    p.add_argument("--measure", choices=["manhattan", "dice"], default="manhattan", help="ngram: profile measure")

    p = sub.add_parser("evaluate", parents=[pre, _classifier_parent(), _split_parent(), _output_parent(figures=True)],
                       formatter_class=fmt, help="split, train, classify and report precision/recall")
    p.add_argument("--corpus", required=True, metavar="DIR", help="corpus root")

    p = sub.add_parser("compare", parents=[pre, _classifier_parent(with_kind=False), _split_parent(),
                                           _output_parent(figures=True)],
                       formatter_class=fmt, help="evaluate several classifiers on one split")
    p.add_argument("--corpus", required=True, metavar="DIR", help="corpus root")
    p.add_argument("--classifiers", default=DEFAULT_COMPARE,
                   help="comma-separated list of nb, knn, ngram, ngram-manhattan, ngram-dice")

    p = sub.add_parser("chi2", parents=[pre, _output_parent(formats=False)], formatter_class=fmt,
                       help="top terms per class by chi-squared")
    p.add_argument("--corpus", required=True, metavar="DIR", help="corpus root")
    p.add_argument("--top", type=_positive, default=30, help="terms to keep per class")
    p.add_argument("--class", dest="label", default=None, help="only this class (default: every class)")
    p.add_argument("--classifier", choices=["nb", "knn", "ngram"], default="nb",
                   help="whose preprocessing defaults to apply")

    p = sub.add_parser("dump-class-files", parents=[pre], formatter_class=fmt,
                       help="write each class's token file (one token per line)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", metavar="DIR", help="build class files from this corpus")
    src.add_argument("--model", metavar="PATH", help="take class files from a saved nb model")
    p.add_argument("--out-dir", required=True, metavar="DIR", help="directory for <class>.txt files")

    p = sub.add_parser("make-corpus", formatter_class=fmt, help="generate a synthetic two-class corpus")
    p.add_argument("--out-dir", required=True, metavar="DIR", help="corpus root to create")
    p.add_argument("--docs-per-class", type=_positive, default=20, help="documents per class")
    p.add_argument("--words", type=_positive, default=30, help="words per document")
    p.add_argument("--noise", type=float, default=0.2, help="share of words drawn from the shared pool")
    p.add_argument("--seed", type=_seed, default=0, help="generator seed")
    return parser


def _options(args) -> PreprocessOptions:
    return PreprocessOptions(
        profile=args.profile,
        stem=args.stem,
        dedupe=args.dedupe,
        stoplist=args.stoplist,
        affixes=args.affixes,
        min_stem_len=args.min_stem_len,
    )


def _spec(args, name=None) -> ClassifierSpec:
    kwargs = dict(alpha=args.alpha, k=args.k, weighting=args.weighting, measure=args.measure, n=args.n, L=args.L)
    if name is None:
        return ClassifierSpec(kind=args.classifier, **kwargs)
    return ClassifierSpec.parse(name, **kwargs)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _score(x: float) -> str:
    return f"{x:.6f}"


def cmd_preprocess(args):
    pre = resolve_preprocessor(args.classifier, _options(args))
    doc = pre(LabeledDocument(Path(args.input).name, read_text(args.input)))
    _emit("".join(f"{t}\n" for t in doc.tokens), args.out)


def cmd_train(args):
    corpus = load_corpus(args.corpus)
    spec = _spec(args)
    pre = resolve_preprocessor(spec.kind, _options(args))
    model = train_classifier(spec, preprocess_corpus(corpus, pre))
    if spec.kind == "nb":
        save_nb(model, args.model)
    elif spec.kind == "knn":
        save_knn(model, args.model)
    else:
        save_ngram(model, args.model)
        if args.profiles_dir:
            out = Path(args.profiles_dir)
            out.mkdir(parents=True, exist_ok=True)
            for label, profile in model.profiles.items():
                save_profile(profile, out / f"{label}.profile")
    print(f"trained {spec.name} on {len(corpus)} documents in {len(corpus.classes)} classes -> {args.model}",
          file=sys.stderr)


def load_model(path):
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
    if header == NB_HEADER:
        return load_nb(path)
    if header == KNN_HEADER:
        return load_knn(path)
    if header.startswith(NGRAM_HEADER + " "):
        return load_ngram(path)
    raise ModelFormatError(f"{path}: unrecognised model header {header!r}")


def _model_preprocessor(model, args) -> Preprocessor:
    """Rebuild the chain recorded in the model, letting explicit flags override it."""
    recorded = parse_fingerprint(model.fingerprint) if model.fingerprint else {}
    profile = args.profile or recorded.get("profile", "system")
    stem = args.stem if args.stem is not None else recorded.get("stem", "off") != "off"
    dedupe = args.dedupe if args.dedupe is not None else recorded.get("dedupe", "on") == "on"
    return Preprocessor.default(profile=profile, stem=stem, dedupe=dedupe, stoplist_path=args.stoplist,
                                affix_path=args.affixes, min_stem_len=args.min_stem_len)


def cmd_classify(args):
    model = load_model(args.model)
    pre = _model_preprocessor(model, args)
    spec = ClassifierSpec(kind="nb", k=args.k, measure=args.measure)
    target = Path(args.input)
    if target.is_dir():
        files = sorted((f for f in target.rglob("*") if f.is_file() and not f.name.startswith(".")),
                       key=lambda f: f.relative_to(target).as_posix())
        prefix = lambda f: f.relative_to(target).as_posix() + "\t"
    elif target.is_file():
        files = [target]
        prefix = lambda f: ""
    else:
        raise DataError(f"input not found: {target}")
    lines = []
    for f in files:
        prediction = predict(model, pre(LabeledDocument(f.name, read_text(f))), spec)
        lines.extend(f"{prefix(f)}{label}\t{_score(s)}" for label, s in prediction.ranked())
    _emit("".join(line + "\n" for line in lines), args.out)


def cmd_evaluate(args):
    corpus = load_corpus(args.corpus)
    report = run_experiment(corpus, _spec(args), SplitSpec(args.train_fraction, args.seed), _options(args))
    _emit(report.to_json() if args.format == "json" else report.to_tsv(), args.out)
    if args.figures:
        from .plotting import report_figures

        for path in report_figures(report, args.figures, prefix=report.metadata["classifier"]):
            print(f"wrote {path}", file=sys.stderr)


def cmd_compare(args):
    names = [n.strip() for n in args.classifiers.split(",") if n.strip()]
    specs = [_spec(args, name) for name in names]
    corpus = load_corpus(args.corpus)
    comparison = compare_classifiers(corpus, specs, SplitSpec(args.train_fraction, args.seed), _options(args))
    _emit(comparison.to_json() if args.format == "json" else comparison.to_tsv(), args.out)
    if args.figures:
        from .plotting import comparison_figures

        for path in comparison_figures(comparison, args.figures):
            print(f"wrote {path}", file=sys.stderr)


def cmd_chi2(args):
    corpus = load_corpus(args.corpus)
    grouped = preprocess_corpus(corpus, resolve_preprocessor(args.classifier, _options(args)))
    labels = [args.label] if args.label else list(grouped)
    lines = ["class\trank\tterm\tscore"]
    for label in labels:
        for rank, (term, score) in enumerate(select_top_terms(grouped, label, args.top), start=1):
            lines.append(f"{label}\t{rank}\t{term}\t{score:.6f}")
    _emit("\n".join(lines) + "\n", args.out)


def cmd_dump_class_files(args):
    if args.model:
        model = load_model(args.model)
        if not hasattr(model, "alpha"):
            raise ConfigError("class files exist only in nb models")
    else:
        corpus = load_corpus(args.corpus)
        model = train_nb(preprocess_corpus(corpus, resolve_preprocessor("nb", _options(args))))
    for path in dump_class_files(model, args.out_dir):
        print(f"wrote {path}", file=sys.stderr)


def cmd_make_corpus(args):
    from .synthetic import make_corpus, write_corpus

    if not 0 <= args.noise < 1:
        raise ConfigError("--noise must be in [0, 1)")
    corpus = make_corpus(args.docs_per_class, args.seed, args.words, args.noise)
    root = write_corpus(corpus, args.out_dir)
    print(f"wrote {len(corpus)} documents to {root}", file=sys.stderr)


COMMANDS = {
    "preprocess": cmd_preprocess,
    "train": cmd_train,
    "classify": cmd_classify,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "chi2": cmd_chi2,
    "dump-class-files": cmd_dump_class_files,
    "make-corpus": cmd_make_corpus,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"mushannif {args.command}: {exc}", file=sys.stderr)
        return 1
    except (MushannifError, OSError, UnicodeError) as exc:
        print(f"mushannif {args.command}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
