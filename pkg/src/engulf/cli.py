"""Command-line front end.

Exit codes: 0 verified / success, 1 a check failed, 2 inconclusive or out
of resources, 3 input error.  ``--format json`` prints a report with a
fixed layout; everything that may differ between runs (wall time, worker
count, kernel backend) sits under ``timing``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import kernels
from .analysis import (
    Verdict,
    abelianization,
    double_cosets,
    engulfing_report,
    is_normal,
    lemma1_check,
    lemma2_orbit_check,
    lemma3_subgroup,
    lemma4_check,
    profinite_closure_bounded,
    theorem2_subgroup,
)
from .coset_enum import CosetOverflow, EnumerationLimits, enumerate_cosets
from .covers import from_coset_table, lemma3_full_check
from .low_index import SearchConstraint, low_index_subgroups
from .normal_form import (
    freeness_probe,
    iso_maps,
    not_free_certificate,
    solve,
    soundness_trials,
    verify_homomorphism,
    verify_mutually_inverse,
)
from .words import (
    ParseError,
    Presentation,
    SubgroupSpec,
    Word,
    builtin_presentations,
    load_presentation,
    parse_word,
    parse_word_list,
)

SCHEMA = 1
OK, FAILED, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


def _builtin(name: str) -> Presentation:
    table = {"G": "G_hnn", "B": "B_bks"}
    if name not in table:
        raise InputError(f"unknown built-in group {name!r} (use G or B)")
    return builtin_presentations()[table[name]]


def _resolve(args, n_after: int) -> tuple[Presentation, list[str]]:
    """Split positionals into an optional presentation file and the rest."""
    pos = list(args.positional)
    if len(pos) == n_after + 1:
        src = pos.pop(0)
        if args.group:
            raise InputError("give either a presentation file or --group, not both")
        if Path(src).exists():
            try:
                return load_presentation(src), pos
            except (ParseError, ValueError) as exc:
                raise InputError(f"{src}: {exc}") from None
        if src in ("G", "B"):
            return _builtin(src), pos
        raise InputError(f"presentation file {src!r} not found")
    if len(pos) == n_after:
        return _builtin(args.group or "G"), pos
    raise InputError(f"expected {n_after} argument(s) after the optional presentation file")


def _subgroup(pres: Presentation, text: str) -> SubgroupSpec:
    return SubgroupSpec(pres, tuple(parse_word_list(text, pres.alphabet)))


def _pres_json(pres: Presentation) -> dict:
    return {"name": pres.name, "generators": list(pres.alphabet.names), "relators": [str(r) for r in pres.relators]}


# --- commands -------------------------------------------------------------
# each returns (inputs, result, completeness, exit_code, text_lines)


def cmd_reduce(args):
    pres = _builtin(args.group or "G")
    w = parse_word(args.word, pres.alphabet)
    form, trivial = solve(w, "G" if pres.name == "G" else "B")
    verdict = "trivial" if trivial else "nontrivial"
    result = {"word": str(w), "normal_form": str(form), "verdict": verdict}
    if pres.name == "G":
        result["t_length"] = form.t_length()
    else:
        result["y_exponent"] = form.y_exponent
    return {"group": pres.name, "word": args.word}, result, True, OK, [verdict, f"normal form: {form}"]


def cmd_tc(args):
    pres, (sub_text,) = _resolve(args, 1)
    sub = _subgroup(pres, sub_text)
    limits = EnumerationLimits(args.max_cosets, args.max_steps)
    inputs = {"presentation": _pres_json(pres), "subgroup": [str(w) for w in sub.generators],
              "max_cosets": limits.max_cosets, "max_steps": limits.max_steps}
    try:
        table = enumerate_cosets(pres, sub, limits)
    except CosetOverflow as exc:
        result = {"status": "overflow", "index": None, "reason": exc.reason}
        return inputs, result, False, INCONCLUSIVE, [f"overflow ({exc.reason}): index unknown"]
    result = {"status": "ok", "index": table.degree, "table": table.to_json()}
    return inputs, result, True, OK, [f"index {table.degree}"]


def cmd_engulf(args):
    pres, (sub_text,) = _resolve(args, 1)
    sub = _subgroup(pres, sub_text)
    rep = engulfing_report(pres, sub, args.max_index, args.threads)
    inputs = {"presentation": _pres_json(pres), "subgroup": [str(w) for w in sub.generators], "max_index": args.max_index}
    lines = [rep.verdict.value]
    if rep.target_is_whole_group:
        lines.append("note: target is the whole group")
    if rep.witness is not None:
        lines.append(f"witness: index {rep.witness.degree} {rep.witness.to_json()['action']}")
    code = INCONCLUSIVE if rep.verdict is Verdict.INCONCLUSIVE else OK
    return inputs, rep.to_json(), rep.search.complete, code, lines


def cmd_low_index(args):
    pres, _ = _resolve(args, 0)
    words = tuple(parse_word_list(args.contain, pres.alphabet)) if args.contain else ()
    res = low_index_subgroups(pres, SearchConstraint(args.max_index, words), args.threads)
    inputs = {"presentation": _pres_json(pres), "max_index": args.max_index, "must_contain": [str(w) for w in words]}
    lines = [f"{len(res)} subgroups of index <= {args.max_index}" + ("" if res.complete else " (incomplete)")]
    lines += [f"  index {k}: {v}" for k, v in sorted(res.count_by_index().items())]
    return inputs, res.to_json(), res.complete, OK if res.complete else INCONCLUSIVE, lines


def cmd_double_cosets(args):
    pres, (sub_text,) = _resolve(args, 1)
    sub = _subgroup(pres, sub_text)
    inputs = {"presentation": _pres_json(pres), "subgroup": [str(w) for w in sub.generators]}
    try:
        table = enumerate_cosets(pres, sub, EnumerationLimits(args.max_cosets))
    except CosetOverflow as exc:
        return inputs, {"status": "overflow", "reason": exc.reason}, False, INCONCLUSIVE, ["overflow: index unknown"]
    dc = double_cosets(table)
    result = dc.to_json()
    result["lemma1_check"] = lemma1_check(table)
    result["lemma2_orbit_check"] = lemma2_orbit_check(table)
    result["normal"] = is_normal(table)
    ok = result["lemma1_check"] and result["lemma2_orbit_check"]
    lines = [f"index {table.degree}, {len(dc)} double cosets", "representatives: " + ", ".join(result["representatives"]),
             f"orbit sizes: {dc.orbit_sizes}"]
    return inputs, result, True, OK if ok else FAILED, lines


def cmd_closure(args):
    pres, (sub_text,) = _resolve(args, 1)
    sub = _subgroup(pres, sub_text)
    res = profinite_closure_bounded(pres, sub, args.max_index, args.threads)
    inputs = {"presentation": _pres_json(pres), "subgroup": [str(w) for w in sub.generators], "max_index": args.max_index}
    lines = [f"closure index {res.closure_table.degree} from {len(res.contributing)} subgroups of index <= {args.max_index}"]
    return inputs, res.to_json(), res.complete, OK if res.complete else INCONCLUSIVE, lines


def cmd_lemma3(args):
    pres = _builtin("G")
    J = lemma3_subgroup(pres)
    found = low_index_subgroups(pres, SearchConstraint(args.max_index, J.generators), args.threads)
    reports = [lemma3_full_check(from_coset_table(H), H) for H in found.tables]
    passed = all(r.passed for r in reports)
    proper = sum(1 for r in reports if r.degree > 1)
    result = {"complete": found.complete, "subgroups": len(reports), "proper_subgroups": proper,
              "all_passed": passed, "reports": [r.to_json() for r in reports]}
    lines = [f"{len(reports)} subgroups of index <= {args.max_index} contain J = <abb, t>"]
    lines += [f"  index {r.degree}: {r.status}" for r in reports]
    code = INCONCLUSIVE if not found.complete else (OK if passed else FAILED)
    return {"max_index": args.max_index, "J": [str(w) for w in J.generators]}, result, found.complete, code, lines


def cmd_lemma4(args):
    pres = _builtin("G")
    if args.g is not None:
        gs = [parse_word(args.g, pres.alphabet)]
    else:
        rng = random.Random(args.seed)
        gs = []
        for _ in range(args.random):
            n = rng.randint(1, 8)
            gs.append(Word.from_letters(pres.alphabet, [rng.choice((1, -1)) * rng.randint(1, 3) for _ in range(n)]))
    results = [lemma4_check(pres, g, args.max_index, args.threads) for g in gs]
    complete = all(r.report.search.complete for r in results)
    ok = all(r.ok for r in results)
    payload = {"results": [r.to_json() for r in results], "all_ok": ok}
    lines = []
    for r in results:
        flag = " (K_g is the whole group)" if r.report.target_is_whole_group else ""
        lines.append(f"g = {str(r.g) or '1'}: {r.report.verdict.value}{flag}, proof replay {'ok' if r.ok else 'FAILED'}")
    code = INCONCLUSIVE if not complete else (OK if ok else FAILED)
    inputs = {"max_index": args.max_index, "g": args.g, "random": args.random, "seed": args.seed}
    return inputs, payload, complete, code, lines


def cmd_theorem2(args):
    pres = _builtin("G")
    K = theorem2_subgroup(pres)
    rep = engulfing_report(pres, K, args.max_index, args.threads)
    free = freeness_probe(K, args.free_length)
    cert = not_free_certificate()
    ok = rep.verdict is Verdict.NOT_ENGULFED_UP_TO_BOUND and not free.violations and cert["not_free"]
    result = {
        "engulfing": rep.to_json(),
        "containers": len(rep.search.tables),
        "freeness": {"max_length": free.max_length, "evaluated": free.evaluated,
                     "evaluated_by_length": {str(k): v for k, v in free.evaluated_by_length.items()},
                     "violations": free.violation_text()},
        "G_not_free": cert,
        "verified": ok,
    }
    lines = [
        f"K = <abb, t, btat^-1b^-1>, index <= {args.max_index}: {len(rep.search.tables)} container(s) -> {rep.verdict.value}",
        f"freeness probe up to length {args.free_length}: {free.evaluated} words, {len(free.violations)} relations",
        f"G not free ([a,b] = 1, a and b nontrivial): {cert['not_free']}",
    ]
    code = INCONCLUSIVE if rep.verdict is Verdict.INCONCLUSIVE else (OK if ok else FAILED)
    return {"max_index": args.max_index, "free_length": args.free_length}, result, rep.search.complete, code, lines


def cmd_iso_check(args):
    f, g = iso_maps()
    G, B = builtin_presentations()["G_hnn"], builtin_presentations()["B_bks"]
    ab_G, ab_B = abelianization(G), abelianization(B)
    counts_G = low_index_subgroups(G, SearchConstraint(args.max_index)).count_by_index()
    counts_B = low_index_subgroups(B, SearchConstraint(args.max_index)).count_by_index()
    result = {
        "G_to_B": f.describe(),
        "B_to_G": g.describe(),
        "G_to_B_homomorphism": verify_homomorphism(f),
        "B_to_G_homomorphism": verify_homomorphism(g),
        "mutually_inverse": verify_mutually_inverse(f, g),
        "abelianization_G": str(ab_G),
        "abelianization_B": str(ab_B),
        "subgroup_counts_G": {str(k): v for k, v in sorted(counts_G.items())},
        "subgroup_counts_B": {str(k): v for k, v in sorted(counts_B.items())},
    }
    ok = (result["G_to_B_homomorphism"] and result["B_to_G_homomorphism"] and result["mutually_inverse"]
          and ab_G == ab_B and counts_G == counts_B)
    result["verified"] = ok
    lines = [f"G -> B: {f.describe()}", f"B -> G: {g.describe()}",
             f"homomorphisms: {result['G_to_B_homomorphism']}, {result['B_to_G_homomorphism']}; "
             f"mutually inverse: {result['mutually_inverse']}",
             f"abelianizations: {ab_G} / {ab_B}; subgroup counts agree: {counts_G == counts_B}"]
    return {"max_index": args.max_index}, result, True, OK if ok else FAILED, lines


def cmd_soundness(args):
    pres = _builtin(args.group or "G")
    res = soundness_trials(pres, args.trials, args.seed)
    result = {"group": pres.name, "trials": res.trials, "insertion_failures": res.insertion_failures,
              "inverse_failures": res.inverse_failures}
    lines = [f"{pres.name}: {res.trials} trials, {res.insertion_failures} insertion and {res.inverse_failures} inverse failures"]
    return {"group": pres.name, "trials": args.trials, "seed": args.seed}, result, True, OK if res.ok else FAILED, lines


def cmd_abelianize(args):
    pres, _ = _resolve(args, 0)
    ab = abelianization(pres)
    result = {"free_rank": ab.free_rank, "torsion": list(ab.torsion), "group": str(ab)}
    return {"presentation": _pres_json(pres)}, result, True, OK, [str(ab)]


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="engulf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, positional=None, group=True, threads=False):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("text", "json"), default="text")
        if group:
            p.add_argument("--group", choices=("G", "B"))
        if threads:
            p.add_argument("--threads", type=int, default=1)
        if positional:
            p.add_argument("positional", nargs="*", metavar=positional)
        return p

    p = add("reduce", cmd_reduce, "normal form and triviality of a word")
    p.add_argument("word")
    p = add("tc", cmd_tc, "coset enumeration", "[PRES] SUBGROUP")
    p.add_argument("--max-cosets", type=int, default=100_000)
    p.add_argument("--max-steps", type=int, default=10_000_000)
    p = add("engulf", cmd_engulf, "engulfing verdict up to an index bound", "[PRES] SUBGROUP", threads=True)
    p.add_argument("--max-index", type=int, required=True)
    p = add("low-index", cmd_low_index, "all subgroups of bounded index", "[PRES]", threads=True)
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--contain", default="", help="semicolon separated words")
    p = add("double-cosets", cmd_double_cosets, "double coset decomposition", "[PRES] SUBGROUP")
    p.add_argument("--max-cosets", type=int, default=100_000)
    p = add("closure", cmd_closure, "bounded profinite closure", "[PRES] SUBGROUP", threads=True)
    p.add_argument("--max-index", type=int, required=True)
    p = add("lemma3", cmd_lemma3, "covering-space check for every H containing <abb, t>", group=False, threads=True)
    p.add_argument("--max-index", type=int, default=8)
    p = add("lemma4", cmd_lemma4, "non-engulfing of <abb, t, a^g>", group=False, threads=True)
    p.add_argument("--max-index", type=int, default=8)
    mx = p.add_mutually_exclusive_group()
    mx.add_argument("--g", help="conjugating word (default t^-1 b^-1)")
    mx.add_argument("--random", type=int, default=0, help="check this many random g")
    p.add_argument("--seed", type=int, default=0)
    p = add("theorem2", cmd_theorem2, "K = <abb, t, btat^-1b^-1> is not engulfed and is free", group=False, threads=True)
    p.add_argument("--max-index", type=int, default=10)
    p.add_argument("--free-length", type=int, default=6)
    p = add("iso-check", cmd_iso_check, "verify the isomorphism between G and the BKS group", group=False)
    p.add_argument("--max-index", type=int, default=3)
    p = add("soundness", cmd_soundness, "randomized word-problem soundness trials")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    add("abelianize", cmd_abelianize, "abelian invariants", "[PRES]")
    return parser


def render(command: str, inputs, result, complete: bool, wall_ms: float, threads: int) -> str:
    report = {
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "result": result,
        "completeness": complete,
        "timing": {"wall_ms": round(wall_ms, 3), "threads": threads, "backend": kernels.BACKEND},
    }
    return json.dumps(report, indent=2, sort_keys=True)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "lemma4" and args.g is None and not args.random:
        args.g = "t^-1 b^-1"
    threads = getattr(args, "threads", 1)
    if threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return INPUT_ERROR
    start = time.perf_counter()
    try:
        inputs, result, complete, code, lines = args.func(args)
    except (ParseError, InputError, ValueError) as exc:
        if args.format == "json":
            print(json.dumps({"schema": SCHEMA, "command": args.command, "error": str(exc)}, indent=2, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    wall = (time.perf_counter() - start) * 1000
    if args.format == "json":
        print(render(args.command, inputs, result, complete, wall, threads))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
