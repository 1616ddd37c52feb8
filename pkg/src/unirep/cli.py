"""``unirep`` command line.

Exit codes: 0 success, 1 semantic failure (no derivation, a check that
does not hold), 2 unusable input (missing file, parse error, bad flag).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis
from .categories import (CategorySyntaxError, LexiconError, Sentence, print_category,
                         read_lexicon)
from .cg import (CGDerivation, ReplayError, SearchBudgetExceeded, derivation_from_json,
                 derive, replay)
from .correspondence import VerificationReport, cg_to_dg, verify_equivalences
from .dg import (ConlluError, DepGraph, GraphError, graph_to_json, projectivity,
                 read_conllu, write_conllu)
from .fixtures import (ArtifactCheck, FixtureError, FixtureReport, check_fixture,
                       fixture_derivation, fixture_names, fixture_tables, load_fixture)
from .psg import (cg_to_psg, crossing_report, extract_rules, parse_brackets, to_brackets,
                  tree_to_json)
from .unified import UnifiedError, build_unified, render

OK, FAIL, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    """Raised for anything that makes the command's input unusable."""


# -- input helpers -------------------------------------------------------------

def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text("utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from e


def _read_json(path: str) -> dict:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e


def _is_bundled(ref: str) -> bool:
    return not Path(ref).suffix and ref in fixture_names()


def _load_document(ref: str) -> dict:
    if _is_bundled(ref):
        return load_fixture(ref)
    return _read_json(ref)


def load_derivation(ref: str) -> CGDerivation:
    """A derivation from a bundled fixture name, a fixture file or derivation JSON."""
    doc = _load_document(ref)
    try:
        if doc.get("kind") == "full":
            return fixture_derivation(doc)
        if doc.get("kind") == "abbreviated":
            raise InputError(f"{ref}: abbreviated fixtures carry no derivation")
        if "steps" in doc:
            return derivation_from_json(doc)
        if "script" in doc:
            sentence = Sentence.from_pairs((t["form"], t["pos"]) for t in doc["tokens"])
            return replay(sentence, doc["lexical_row"], doc["script"])
    except KeyError as e:
        raise InputError(f"{ref}: missing field {e}") from e
    except CategorySyntaxError as e:
        raise InputError(f"{ref}: {e}") from e
    raise InputError(f"{ref}: not a derivation or fixture document")


def _parse_tokens(items: list[str], lexicon) -> Sentence:
    pairs = []
    for item in items:
        form, sep, pos = item.rpartition(":")
        if not sep:
            form = item
            tags = sorted(lexicon.tags_for(form))
            if len(tags) != 1:
                raise InputError(f"token {form!r}: give its tag as form:POS "
                                 f"(lexicon has {tags or 'none'})")
            pos = tags[0]
        pairs.append((form, pos))
    return Sentence.from_pairs(pairs)


# -- output --------------------------------------------------------------------

def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2,
                                                               ensure_ascii=False) + "\n"
    if args.output:
        Path(args.output).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def _require_format(args, allowed: tuple[str, ...], default: str) -> str:
    fmt = args.format or default
    if fmt not in allowed:
        raise InputError(f"{args.command}: format must be one of {', '.join(allowed)}")
    return fmt


def derivation_text(d: CGDerivation) -> str:
    lines = [" ".join(d.sentence.forms),
             "lexical: " + "  ".join(print_category(c) for c in d.lexical_row)]
    for s in d.steps:
        f, a = s.cg_pair
        wrap = f"  wrapped over {s.intervener_count}" if s.wrapped else ""
        lines.append(f"step {s.step_no}: {d.sentence[f].form} {print_category(s.functor.category)}"
                     f" + {d.sentence[a].form} {print_category(s.argument.category)}"
                     f" -> {print_category(s.result.category)} ({s.direction}){wrap}")
    lines.append(f"final: {print_category(d.final.category)}")
    return "\n".join(lines) + "\n"


def report_text(report: VerificationReport) -> str:
    lines = [f"{e.step_no}: {e.render()}    [{e.kind}]  {e.render(pos=True)}"
             for e in report.equivalences]
    lines += [f"{s}: FAIL {m}" for s, m in report.failures]
    if not report.graph_matches:
        lines.append(f"graph mismatch: missing {report.missing_edges}, extra {report.extra_edges}")
    c = report.counts
    lines.append(f"{c['direct']} direct, {c['mediated']} mediated: "
                 f"{'pass' if report.passed else 'fail'}")
    return "\n".join(lines) + "\n"


def graph_text(sentence: Sentence, g: DepGraph, start: int) -> str:
    lines = []
    heads = g.heads()
    for t in sentence:
        h = heads.get(t.index)
        target = "ROOT" if h is None else f"{sentence[h].form} ({h})"
        lines.append(f"{t.index}  {t.form:<12} {t.pos:<6} <- {target:<16} δ={g.depth(t.index) + start}")
    p = projectivity(g)
    lines.append("projective" if p.projective else f"non-projective: {len(p.crossings)} crossing pair(s)")
    return "\n".join(lines) + "\n"


# -- commands ------------------------------------------------------------------

def cmd_derive(args) -> int:
    fmt = _require_format(args, ("text", "json"), "text")
    if not args.lexicon:
        raise InputError("derive needs --lexicon")
    try:
        lexicon = read_lexicon(args.lexicon)
    except OSError as e:
        raise InputError(f"{args.lexicon}: {e.strerror or e}") from e
    items = args.tokens + (args.sentence.split() if args.sentence else [])
    if not items:
        raise InputError("derive needs tokens")
    sentence = _parse_tokens(items, lexicon)
    missing = lexicon.missing(sentence)
    if missing:
        raise InputError("no lexicon entry for " + ", ".join(repr(t.form) for t in missing))
    derivations = derive(sentence, lexicon, args.goal)
    if args.max_wrapped is not None:
        derivations = [d for d in derivations if d.n_wrapped <= args.max_wrapped]
    if fmt == "json":
        _emit(args, {"goal": args.goal, "count": len(derivations),
                     "derivations": [d.to_json() for d in derivations]})
    else:
        blocks = [f"derivation {i} ({d.n_wrapped} wrapped)\n{derivation_text(d)}"
                  for i, d in enumerate(derivations, 1)]
        _emit(args, "\n".join(blocks) if blocks else f"no derivation of {args.goal}\n")
    return OK if derivations else FAIL


def cmd_replay(args) -> int:
    fmt = _require_format(args, ("text", "json"), "text")
    d = load_derivation(args.input)
    _emit(args, d.to_json() if fmt == "json" else derivation_text(d))
    return OK


def cmd_verify(args) -> int:
    fmt = _require_format(args, ("text", "json"), "text")
    refs = args.fixtures or fixture_names()
    reports = []
    for ref in refs:
        fx = _load_document(ref)
        if fx.get("kind") not in ("full", "abbreviated"):
            raise InputError(f"{ref}: not a fixture")
        try:
            reports.append(check_fixture(fx))
        except ReplayError as e:
            reports.append(FixtureReport(fx.get("name", ref),
                                         [ArtifactCheck("replay", False, detail=str(e))]))
    if fmt == "json":
        _emit(args, {"verdict": "pass" if all(r.passed for r in reports) else "fail",
                     "fixtures": [r.to_json() for r in reports]})
    else:
        _emit(args, "".join(r.text() for r in reports))
    return OK if all(r.passed for r in reports) else FAIL


def _read_graphs(path: str) -> list:
    """(sentence, graph) pairs from a CoNLL-U file."""
    try:
        pairs = read_conllu(_read_text(path))
    except ConlluError as e:
        raise InputError(f"{path}: {e}") from e
    if not pairs:
        raise InputError(f"{path}: no sentences")
    return pairs


def cmd_dg2cg(args) -> int:
    fmt = _require_format(args, ("text", "json"), "text")
    pairs = _read_graphs(args.conllu)
    lexicon = read_lexicon(args.lexicon) if args.lexicon else None
    results = []
    status = OK
    for sentence, g in pairs:
        if args.derivation:
            d = load_derivation(args.derivation)
            if d.sentence.forms != sentence.forms:
                raise InputError("derivation and CoNLL-U sentence differ")
        elif len(sentence) == 1:
            d = None
        elif lexicon is not None:
            candidates = [c for c in derive(sentence, lexicon, args.goal)
                          if verify_equivalences(g, c).passed]
            d = candidates[0] if candidates else None
            if d is None:
                status = FAIL
                results.append((sentence, None))
                continue
        else:
            raise InputError("dg2cg needs --derivation or --lexicon for multi-word sentences")
        report = verify_equivalences(g, d) if d is not None else VerificationReport(graph_matches=True)
        if not report.passed:
            status = FAIL
        results.append((sentence, report))
    if fmt == "json":
        _emit(args, {"sentences": [
            {"tokens": [{"form": t.form, "pos": t.pos} for t in s],
             "report": r.to_json() if r is not None else None} for s, r in results]})
    else:
        out = []
        for s, r in results:
            out.append("# " + " ".join(s.forms) + "\n")
            out.append(report_text(r) if r is not None else f"no {args.goal} derivation matches the graph\n")
        _emit(args, "".join(out))
    return status


def cmd_cg2dg(args) -> int:
    fmt = _require_format(args, ("text", "json", "conllu"), "text")
    d = load_derivation(args.input)
    g = cg_to_dg(d)
    if fmt == "conllu":
        _emit(args, write_conllu(d.sentence, g))
    elif fmt == "json":
        doc = graph_to_json(g, d.sentence, args.delta_start)
        p = projectivity(g)
        doc["projective"] = p.projective
        doc["crossings"] = [[list(a), list(b)] for a, b in p.crossings]
        _emit(args, doc)
    else:
        _emit(args, graph_text(d.sentence, g, args.delta_start))
    return OK


def cmd_cg2psg(args) -> int:
    fmt = _require_format(args, ("brackets", "text", "json"), "brackets")
    tree = cg_to_psg(load_derivation(args.input))
    _emit(args, tree_to_json(tree) if fmt == "json" else to_brackets(tree) + "\n")
    return OK


def cmd_rules(args) -> int:
    fmt = _require_format(args, ("text", "json"), "text")
    if args.tree:
        try:
            tree = parse_brackets(_read_text(args.input))
        except (ValueError, IndexError) as e:
            raise InputError(f"{args.input}: {e}") from e
    else:
        tree = cg_to_psg(load_derivation(args.input))
    rules = sorted(extract_rules(tree, lexical=args.lexical), key=lambda r: (r.lhs, r.rhs))
    crossings = len(crossing_report(tree))
    if fmt == "json":
        _emit(args, {"rules": [{"lhs": r.lhs, "rhs": list(r.rhs)} for r in rules],
                     "crossings": crossings})
    else:
        _emit(args, "".join(f"{r}\n" for r in rules))
    return OK


def cmd_unify(args) -> int:
    fmt = _require_format(args, ("text", "json", "latex"), "text")
    doc = _load_document(args.input)
    if doc.get("kind") == "abbreviated":
        tables = list(fixture_tables(doc).items())
    else:
        d = load_derivation(args.input)
        g = _read_graphs(args.conllu)[0][1] if args.conllu else None
        tables = [("", build_unified(d, g, args.delta_start))]
    if fmt == "json":
        docs = [render(t, "json") for _, t in tables]
        _emit(args, docs[0] if len(docs) == 1 else {"tables": docs})
    else:
        parts = [(f"# {label}\n" if label and len(tables) > 1 else "") + render(t, fmt)
                 for label, t in tables]
        _emit(args, "\n".join(parts))
    return OK


def cmd_complexity(args) -> int:
    fmt = _require_format(args, ("text", "json"), "text")
    labels = args.labels.split(",") if args.labels else None
    if labels and len(labels) != args.formalisms:
        raise InputError("--labels must name exactly --formalisms labels")
    try:
        report = analysis.complexity_report(args.formalisms, args.sentences,
                                            args.enumerate, labels)
    except ValueError as e:
        raise InputError(str(e)) from e
    if fmt == "json":
        _emit(args, report.to_json())
    else:
        text = report.table()
        for a in report.assignments or ():
            text += "  " + ", ".join(analysis.label_assignment(a)) + "\n"
        _emit(args, text)
    return OK


def cmd_sequnion(args) -> int:
    fmt = _require_format(args, ("text", "json"), "text")
    l1 = [x for x in args.first.split(",") if x]
    l2 = [x for x in args.second.split(",") if x]
    try:
        seqs = sorted(analysis.sequence_union(l1, l2))
    except ValueError as e:
        raise InputError(str(e)) from e
    if fmt == "json":
        _emit(args, {"count": len(seqs), "sequences": [list(s) for s in seqs]})
    else:
        _emit(args, "".join("<" + ", ".join(s) + ">\n" for s in seqs))
    return OK


# -- parser ----------------------------------------------------------------------

def _common(top: bool) -> argparse.ArgumentParser:
    """Shared flags; sub-command copies must not overwrite values given earlier."""
    def default(value):
        return value if top else argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", default=default(None),
                        help="output format (depends on the command)")
    common.add_argument("--delta-start", type=int, choices=(0, 1), default=default(0),
                        help="δ value of the root (default 0)")
    common.add_argument("--lexicon", default=default(None),
                        help="lexicon file: form<TAB>pos<TAB>category")
    common.add_argument("--output", "-o", default=default(None),
                        help="write to this file instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(top=False)
    p = argparse.ArgumentParser(prog="unirep", parents=[_common(top=True)],
                                description="Convert between categorial, dependency and "
                                            "constituency analyses and build unified tables.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("derive", parents=[common], help="search for derivations")
    s.add_argument("tokens", nargs="*",
                   help="tokens as form or form:POS (put -- before tokens starting with '-')")
    s.add_argument("--sentence", help="the tokens as one whitespace-separated string")
    s.add_argument("--goal", default="S")
    s.add_argument("--max-wrapped", type=int, help="drop derivations with more wrapped steps")
    s.set_defaults(fn=cmd_derive)

    s = sub.add_parser("replay", parents=[common], help="replay a fixture or script")
    s.add_argument("input")
    s.set_defaults(fn=cmd_replay)

    s = sub.add_parser("verify", parents=[common], help="check fixtures end to end")
    s.add_argument("fixtures", nargs="*", help="fixture names or files (default: all bundled)")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("dg2cg", parents=[common], help="equivalences for a CoNLL-U graph")
    s.add_argument("conllu")
    s.add_argument("--derivation", help="derivation or fixture to check against the graph")
    s.add_argument("--goal", default="S")
    s.set_defaults(fn=cmd_dg2cg)

    s = sub.add_parser("cg2dg", parents=[common], help="dependency graph of a derivation")
    s.add_argument("input")
    s.set_defaults(fn=cmd_cg2dg)

    s = sub.add_parser("cg2psg", parents=[common], help="constituency tree of a derivation")
    s.add_argument("input")
    s.set_defaults(fn=cmd_cg2psg)

    s = sub.add_parser("rules", parents=[common], help="phrase-structure rules")
    s.add_argument("input")
    s.add_argument("--tree", action="store_true", help="input is a bracketed tree")
    s.add_argument("--lexical", action="store_true", help="include preterminal rules")
    s.set_defaults(fn=cmd_rules)

    s = sub.add_parser("unify", parents=[common], help="unified table")
    s.add_argument("input")
    s.add_argument("--conllu", help="dependency graph to check the derivation against")
    s.set_defaults(fn=cmd_unify)

    s = sub.add_parser("complexity", parents=[common], help="representation and mapping counts")
    s.add_argument("--formalisms", type=int, default=3)
    s.add_argument("--sentences", type=int, required=True)
    s.add_argument("--enumerate", type=int, default=0, metavar="CAP",
                   help="list assignments when there are at most CAP of them")
    s.add_argument("--labels", help="comma-separated formalism labels")
    s.set_defaults(fn=cmd_complexity)

    s = sub.add_parser("sequnion", parents=[common], help="order-preserving interleavings")
    s.add_argument("first", help="comma-separated list")
    s.add_argument("second", help="comma-separated list")
    s.set_defaults(fn=cmd_sequnion)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return BAD_INPUT if e.code else OK
    try:
        return args.fn(args)
    except (InputError, FixtureError, CategorySyntaxError, LexiconError, ConlluError) as e:
        print(f"unirep: {e}", file=sys.stderr)
        return BAD_INPUT
    except (ReplayError, GraphError, UnifiedError, SearchBudgetExceeded) as e:
        print(f"unirep: {e}", file=sys.stderr)
        return FAIL


def run() -> None:
    sys.exit(main())
