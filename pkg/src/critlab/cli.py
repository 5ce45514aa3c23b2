"""Command-line front end.

Human mode prints readable summaries; ``--machine`` prints one JSON
document (valid JSON on every path, errors included).  Exit codes:
0 success, 1 validation failure, 2 usage error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import multiprocessing
import os
import sys
from fractions import Fraction

from . import __version__
from ._bits import iter_bits
from .acceptance import CRITERIA, run_all
from .dyson import dyson_run
from .errors import CritlabError, SearchBudgetError, SoundnessError
from .group_core import (
    FiniteGroup,
    SemidirectSpec,
    Subgroup,
    build_cyclic,
    build_dihedral,
    build_product,
    build_semidirect,
    small_groups,
    subgroups,
)
from .reduction import (
    detect_sturmian_reduction,
    kemperman_reduce,
    kneser_reduce,
    validate_certificate,
    vosper_classify,
    witness_checks,
)
from .relative import (
    detect_local_subcritical,
    is_critical_wrt,
    relativize,
)
from .subset_algebra import GroupSubset, PairTag, classify_pair, stabilizer
from .sweeps import survey_rows
from .torus_exact import (
    ArcSet,
    SturmianSpec,
    arc_sumset,
    arcset_measure,
    is_stable_pair,
    make_sturmian,
    parse_rational,
    twisted_measure,
    twisted_product,
)

_TAGS = {t.value.lower(): t for t in PairTag}
_FILTERS = {
    "critical": PairTag.CRITICAL_SUM,
    "criticalsum": PairTag.CRITICAL_SUM,
    "subcritical": PairTag.SUB_CRITICAL,
    "criticalfull": PairTag.CRITICAL_FULL,
    "supercritical": PairTag.SUPER_CRITICAL,
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Input parsing: groups, subsets, rationals


def parse_group(spec: str) -> FiniteGroup:
    """Mini-language: Zn | ZaxZb | Dn | sd:N,K,u (u = unit multiplier
    action of the Z_K generator on Z_N)."""
    s = spec.strip()
    try:
        if s.startswith("sd:"):
            parts = s[3:].split(",")
            if len(parts) != 3:
                raise UsageError(f"sd spec needs N,K,action-id: {spec!r}")
            n, k, unit = (int(p) for p in parts)
            zn = build_cyclic(n)
            zk = build_cyclic(k)
            tables = []
            power = 1
            for _ in range(k):
                tables.append(tuple((i * power) % n for i in range(n)))
                power = (power * unit) % n
            g = build_semidirect(SemidirectSpec(zn, zk, tuple(tables)))
            g.name = f"sd:{n},{k},{unit}"
            return g
        low = s.lower()
        if low.startswith("d") and low[1:].isdigit():
            return build_dihedral(int(low[1:]))
        if "x" in low and low.startswith("z"):
            a_txt, b_txt = low.split("x", 1)
            if not (a_txt.startswith("z") and b_txt.startswith("z")):
                raise UsageError(f"bad product group spec: {spec!r}")
            return build_product(
                build_cyclic(int(a_txt[1:])), build_cyclic(int(b_txt[1:]))
            )
        if low.startswith("z") and low[1:].isdigit():
            return build_cyclic(int(low[1:]))
    except ValueError as exc:
        raise UsageError(f"cannot build group {spec!r}: {exc}") from exc
    raise UsageError(f"unrecognized group spec {spec!r} (try Z6, Z2xZ4, D4, sd:3,2,2)")


def parse_subset(g: FiniteGroup, text: str) -> GroupSubset:
    """Subset literal: '0-3,7' index ranges, JSON array, or element labels."""
    t = text.strip()
    try:
        if t.startswith("["):
            data = json.loads(t)
            return GroupSubset.from_indices(g, [int(v) for v in data])
        indices: list[int] = []
        labels = {lab: i for i, lab in enumerate(g.labels)}
        for chunk in t.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            if chunk in labels:
                indices.append(labels[chunk])
            elif "-" in chunk and not chunk.startswith("-"):
                lo_txt, hi_txt = chunk.split("-", 1)
                lo, hi = int(lo_txt), int(hi_txt)
                if hi < lo:
                    raise UsageError(f"empty range {chunk!r}")
                indices.extend(range(lo, hi + 1))
            else:
                indices.append(int(chunk))
        return GroupSubset.from_indices(g, indices)
    except UsageError:
        raise
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse subset {text!r}: {exc}") from exc


def parse_arcset(text: str) -> ArcSet:
    """ArcSet literal: JSON {arcs:[{start,length}],added:[],removed:[]}
    or shorthand 'start:length[,start:length...]' with p/q rationals."""
    t = text.strip()
    try:
        if t.startswith("{"):
            return ArcSet.from_json_dict(json.loads(t))
        arcs = []
        for chunk in t.split(","):
            if not chunk.strip():
                continue
            start_txt, length_txt = chunk.split(":", 1)
            arcs.append(
                (parse_rational(start_txt.strip()), parse_rational(length_txt.strip()))
            )
        return ArcSet.from_intervals(*arcs)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse arc set {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# Report plumbing


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def report(command: str, inputs: dict, results: dict, validations: list) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "validations": [[name, bool(okay)] for name, okay in validations],
        "version": __version__,
    }


def _emit(doc: dict, machine: bool) -> None:
    if machine:
        json.dump(doc, sys.stdout, default=str)
        sys.stdout.write("\n")
        return
    print(f"[{doc['command']}]")
    for key, value in doc["results"].items():
        print(f"  {key}: {value}")
    for name, okay in doc["validations"]:
        print(f"  check {name}: {'ok' if okay else 'FAILED'}")


def _subset_out(s: GroupSubset) -> list[int]:
    return sorted(iter_bits(s.bits))


# ---------------------------------------------------------------------------
# Commands


def cmd_group(args) -> int:
    g = parse_group(args.group)
    subs = subgroups(g, normal_only=args.normal_only)
    results = {
        "name": g.name,
        "order": g.order,
        "abelian": g.is_abelian,
        "labels": list(g.labels),
        "subgroups": [sorted(iter_bits(h.members)) for h in subs],
    }
    doc = report("group", {"group": args.group}, results, [])
    _emit(doc, args.machine)
    return 0


def cmd_classify(args) -> int:
    g = parse_group(args.group)
    a = parse_subset(g, args.a)
    b = parse_subset(g, args.b)
    cls = classify_pair(a, b)
    h = stabilizer(cls.product)
    results = {
        "class": cls.tag.value,
        "deficit": _frac(cls.deficit),
        "measure_a": _frac(cls.measure_a),
        "measure_b": _frac(cls.measure_b),
        "measure_product": _frac(cls.measure_product),
        "product": _subset_out(cls.product),
        "stabilizer": sorted(iter_bits(h.members)),
    }
    doc = report(
        "classify",
        {"group": args.group, "A": _subset_out(a), "B": _subset_out(b)},
        results,
        [("measures-consistent", cls.measure_product == Fraction(cls.product.size, g.order))],
    )
    _emit(doc, args.machine)
    return 0


def cmd_dyson(args) -> int:
    g = parse_group(args.group)
    a = parse_subset(g, args.a)
    b = parse_subset(g, args.b)
    trace = dyson_run(a, b)
    conserved = all(
        step.a.size + step.b.size == a.size + b.size for step in trace.steps
    )
    results = {
        "steps": [
            {
                "pivot": step.pivot,
                "a": _subset_out(step.a),
                "b": _subset_out(step.b),
            }
            for step in trace.steps
        ],
        "reason": trace.reason.value,
        "final_a": _subset_out(trace.final_a),
        "final_b": _subset_out(trace.final_b),
    }
    doc = report(
        "dyson",
        {"group": args.group, "A": _subset_out(a), "B": _subset_out(b)},
        results,
        [("size-sum-conserved", conserved)],
    )
    _emit(doc, args.machine)
    return 0


def cmd_reduce(args) -> int:
    g = parse_group(args.group)
    a = parse_subset(g, args.a)
    b = parse_subset(g, args.b)
    if args.method == "kneser":
        cert = kneser_reduce(a, b)
    else:
        cert = kemperman_reduce(a, b)
    checks = validate_certificate(cert, a, b)
    results = {"certificate": cert.to_json_dict()}
    doc = report(
        "reduce",
        {
            "group": args.group,
            "A": _subset_out(a),
            "B": _subset_out(b),
            "method": args.method,
        },
        results,
        sorted(checks.items()),
    )
    _emit(doc, args.machine)
    return 0 if all(checks.values()) else 1


def cmd_vosper(args) -> int:
    g = parse_group(args.group)
    a = parse_subset(g, args.a)
    b = parse_subset(g, args.b)
    vs = vosper_classify(a, b)
    results = vs.to_json_dict()
    doc = report(
        "vosper",
        {"group": args.group, "A": _subset_out(a), "B": _subset_out(b)},
        results,
        [("tight", a.size + b.size - 1 == classify_pair(a, b).product.size)],
    )
    _emit(doc, args.machine)
    return 0


def cmd_sturmian(args) -> int:
    if args.detect:
        g = parse_group(args.group)
        a = parse_subset(g, args.a)
        b = parse_subset(g, args.b)
        witness = detect_sturmian_reduction(a, b, budget=args.budget)
        if witness is None:
            doc = report(
                "sturmian",
                {"group": args.group, "A": _subset_out(a), "B": _subset_out(b)},
                {"witness": None},
                [],
            )
            _emit(doc, args.machine)
            return 1
        checks = witness_checks(witness, a, b)
        doc = report(
            "sturmian",
            {"group": args.group, "A": _subset_out(a), "B": _subset_out(b)},
            {"witness": witness.to_json_dict()},
            sorted(checks.items()),
        )
        _emit(doc, args.machine)
        return 0 if all(checks.values()) else 1
    spec = SturmianSpec(
        target=args.target,
        half_length_i=parse_rational(args.half_i),
        half_length_j=parse_rational(args.half_j),
        shift_s=parse_rational(args.shift_s),
        shift_t=parse_rational(args.shift_t),
    )
    a, b = make_sturmian(spec)
    if args.target == "plain":
        prod = arc_sumset(a, b)
        results = {
            "a": a.to_json_dict(),
            "b": b.to_json_dict(),
            "measure_a": _frac(arcset_measure(a)),
            "measure_b": _frac(arcset_measure(b)),
            "measure_product": _frac(arcset_measure(prod)),
        }
        crit = arcset_measure(prod) == arcset_measure(a) + arcset_measure(b)
    else:
        prod = twisted_product(a, b)
        results = {
            "a": a.to_json_dict(),
            "b": b.to_json_dict(),
            "measure_a": _frac(twisted_measure(a)),
            "measure_b": _frac(twisted_measure(b)),
            "measure_product": _frac(twisted_measure(prod)),
        }
        crit = twisted_measure(prod) == twisted_measure(a) + twisted_measure(b)
    doc = report(
        "sturmian",
        {
            "target": args.target,
            "half_i": args.half_i,
            "half_j": args.half_j,
            "shift_s": args.shift_s,
            "shift_t": args.shift_t,
        },
        results,
        [("critical-sum", crit)],
    )
    _emit(doc, args.machine)
    return 0 if crit else 1


def cmd_stability(args) -> int:
    i = parse_arcset(args.i)
    j = parse_arcset(args.j)
    stable = is_stable_pair(i, j)
    doc = report(
        "stability",
        {"I": i.to_json_dict(), "J": j.to_json_dict()},
        {"stable": stable},
        [],
    )
    _emit(doc, args.machine)
    return 0


def cmd_relative(args) -> int:
    g = parse_group(args.group)
    a = parse_subset(g, args.a)
    b = parse_subset(g, args.b)
    if args.u is None:
        hit = detect_local_subcritical(a, b, widen=args.widen)
        results = {
            "locally_subcritical": hit is not None,
            "witness": None
            if hit is None
            else {
                "subgroup": sorted(iter_bits(hit[0].members)),
                "x": hit[1],
                "y": hit[2],
            },
        }
        doc = report(
            "relative",
            {"group": args.group, "A": _subset_out(a), "B": _subset_out(b)},
            results,
            [],
        )
        _emit(doc, args.machine)
        return 0
    u = Subgroup.from_members(g, parse_subset(g, args.u).bits)
    if args.wrt_only:
        witness = is_critical_wrt(a, b, u)
        doc = report(
            "relative",
            {
                "group": args.group,
                "A": _subset_out(a),
                "B": _subset_out(b),
                "U": _subset_out(GroupSubset(g, u.members)),
            },
            witness.to_json_dict(),
            [],
        )
        _emit(doc, args.machine)
        return 0
    out = relativize(a, b, u)
    results = {
        "kind": out.kind,
        "slice_pair": out.slice_pair,
        "L": None if out.subgroup_l is None else sorted(iter_bits(out.subgroup_l.members)),
        "constant_slice_measure_a": None
        if out.constant_slice_measure_a is None
        else _frac(out.constant_slice_measure_a),
        "constant_slice_measure_b": None
        if out.constant_slice_measure_b is None
        else _frac(out.constant_slice_measure_b),
    }
    validations = []
    if out.witness is not None:
        validations.append(("critical-wrt-U-in-L", out.witness.holds))
    doc = report(
        "relative",
        {
            "group": args.group,
            "A": _subset_out(a),
            "B": _subset_out(b),
            "U": _subset_out(GroupSubset(g, u.members)),
        },
        results,
        validations,
    )
    _emit(doc, args.machine)
    return 0


# ---------------------------------------------------------------------------
# Survey: deterministic streaming with checkpoint resume and worker pools

_CSV_COLUMNS = [
    "group",
    "a",
    "b",
    "size_a",
    "size_b",
    "class",
    "locally_subcritical",
    "local_witness",
    "certificate_valid",
    "certificate_error",
]


def _survey_groups(family: str, max_param: int) -> list[str]:
    if family == "cyclic":
        return [f"Z{n}" for n in range(1, max_param + 1)]
    if family == "dihedral":
        return [f"D{n}" for n in range(3, max_param + 1)]
    if family == "all":
        return [g.name for g in small_groups(max_param)]
    raise UsageError(f"unknown family {family!r} (cyclic, dihedral, all)")


def _group_from_catalog(name: str) -> FiniteGroup:
    for g in small_groups(12):
        if g.name == name:
            return g
    return parse_group(name)


def _survey_one_group(task: tuple[str, str | None, str | None]) -> list[dict]:
    name, filter_name, check = task
    g = _group_from_catalog(name)
    tag = _FILTERS[filter_name] if filter_name else None
    return list(survey_rows(g, tag_filter=tag, check=check))


def _row_text(row: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(row, default=str)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="")
    writer.writerow([json.dumps(row.get(c), default=str) if isinstance(row.get(c), (list, tuple, dict)) else row.get(c, "") for c in _CSV_COLUMNS])
    return buf.getvalue()


def _survey_signature(args) -> str:
    key = json.dumps(
        {
            "family": args.family,
            "max": args.max,
            "filter": args.filter,
            "check": args.check,
            "format": args.format,
            "version": __version__,
        },
        sort_keys=True,
    )
    return hashlib.sha256(key.encode()).hexdigest()


def cmd_survey(args) -> int:
    if args.filter and args.filter not in _FILTERS:
        raise UsageError(f"unknown filter {args.filter!r}")
    names = _survey_groups(args.family, args.max)
    signature = _survey_signature(args)
    done = 0
    done_hash = ""
    if args.checkpoint and os.path.exists(args.checkpoint):
        with open(args.checkpoint) as fh:
            state = json.load(fh)
        if state.get("signature") == signature:
            done = int(state.get("rows_done", 0))
            done_hash = state.get("prefix_sha256", "")
        # A checkpoint for different parameters is ignored, not an error.

    tasks = [(name, args.filter, args.check) for name in names]
    if args.jobs > 1:
        pool = multiprocessing.Pool(processes=args.jobs)
        chunks = pool.imap(_survey_one_group, tasks)  # ordered merge
    else:
        pool = None
        chunks = map(_survey_one_group, tasks)

    if args.format == "csv" and done == 0:
        print(",".join(_CSV_COLUMNS))
    emitted = 0
    counts: dict[str, int] = {}
    hasher = hashlib.sha256()  # over row lines only, so resume replays align
    try:
        for rows in chunks:
            for row in rows:
                text = _row_text(row, args.format)
                hasher.update(text.encode())
                hasher.update(b"\n")
                emitted += 1
                if emitted <= done:
                    if emitted == done and hasher.hexdigest() != done_hash:
                        raise SoundnessError(
                            "checkpoint prefix hash mismatch: the replayed "
                            "enumeration differs from the checkpointed run"
                        )
                    continue
                print(text)
                counts[row["group"]] = counts.get(row["group"], 0) + 1
                if args.checkpoint:
                    state = {
                        "signature": signature,
                        "rows_done": emitted,
                        "prefix_sha256": hasher.hexdigest(),
                    }
                    with open(args.checkpoint, "w") as fh:
                        json.dump(state, fh)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    if done > emitted:
        raise SoundnessError(
            f"checkpoint claims {done} rows but the enumeration has {emitted}"
        )
    if not args.machine and args.format == "json":
        print(
            json.dumps({"rows": emitted - done, "groups": counts}, default=str),
            file=sys.stderr,
        )
    return 0


def cmd_verify(args) -> int:
    if args.suite == "all":
        numbers = sorted(CRITERIA)
    else:
        try:
            numbers = sorted({int(tok) for tok in args.suite.split(",")})
        except ValueError as exc:
            raise UsageError(f"bad suite {args.suite!r} (use 'all' or '1,4,9')") from exc
        unknown = [k for k in numbers if k not in CRITERIA]
        if unknown:
            raise UsageError(f"unknown criteria {unknown}")
    results = run_all(numbers)
    if args.machine:
        doc = report(
            "verify",
            {"suite": args.suite},
            {"criteria": [r.to_json_dict() for r in results]},
            [(f"criterion-{r.number}", r.passed) for r in results],
        )
        json.dump(doc, sys.stdout, default=str)
        sys.stdout.write("\n")
    else:
        for r in results:
            print(r.line)
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critlab",
        description="Exact structure theory of small product sets: classify, "
        "transform, reduce, and survey subset pairs in finite groups and "
        "circle models.",
    )
    parser.add_argument("--machine", action="store_true", help="JSON output")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("group", help="build a group and list its subgroups")
    p.add_argument("--group", required=True)
    p.add_argument("--normal-only", action="store_true")
    p.set_defaults(fn=cmd_group)

    p = sub.add_parser("classify", help="classify a subset pair")
    p.add_argument("--group", required=True)
    p.add_argument("--A", dest="a", required=True)
    p.add_argument("--B", dest="b", required=True)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("dyson", help="run the measure-preserving transform")
    p.add_argument("--group", required=True)
    p.add_argument("--A", dest="a", required=True)
    p.add_argument("--B", dest="b", required=True)
    p.set_defaults(fn=cmd_dyson)

    p = sub.add_parser("reduce", help="quotient-model reduction certificate")
    p.add_argument("--group", required=True)
    p.add_argument("--A", dest="a", required=True)
    p.add_argument("--B", dest="b", required=True)
    p.add_argument("--method", choices=["kneser", "kemperman"], default="kneser")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("vosper", help="progression structure of a tight pair")
    p.add_argument("--group", required=True)
    p.add_argument("--A", dest="a", required=True)
    p.add_argument("--B", dest="b", required=True)
    p.set_defaults(fn=cmd_vosper)

    p = sub.add_parser(
        "sturmian", help="build an interval-model pair, or detect one (--detect)"
    )
    p.add_argument("--detect", action="store_true")
    p.add_argument("--group")
    p.add_argument("--A", dest="a")
    p.add_argument("--B", dest="b")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--target", choices=["plain", "twisted"], default="plain")
    p.add_argument("--half-i", dest="half_i", default="1/8")
    p.add_argument("--half-j", dest="half_j", default="1/8")
    p.add_argument("--shift-s", dest="shift_s", default="0")
    p.add_argument("--shift-t", dest="shift_t", default="0")
    p.set_defaults(fn=cmd_sturmian)

    p = sub.add_parser("stability", help="left-stability of an arc-set pair")
    p.add_argument("--I", dest="i", required=True)
    p.add_argument("--J", dest="j", required=True)
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser(
        "relative", help="slice criticality relative to a normal subgroup"
    )
    p.add_argument("--group", required=True)
    p.add_argument("--A", dest="a", required=True)
    p.add_argument("--B", dest="b", required=True)
    p.add_argument("--U", dest="u", help="normal subgroup members; omit to search")
    p.add_argument("--wrt-only", action="store_true", help="criticality witness only")
    p.add_argument("--widen", action="store_true", help="search non-normal subgroups")
    p.set_defaults(fn=cmd_relative)

    p = sub.add_parser("survey", help="exhaustive pair survey over a family")
    p.add_argument("--family", required=True, help="cyclic | dihedral | all")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--filter", help="critical | subcritical | criticalfull | supercritical")
    p.add_argument("--check", choices=["kneser", "kemperman"])
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--checkpoint", help="resume file; remaining output is byte-identical")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_survey)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--suite", default="all", help="'all' or comma list like '1,6,10'")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    machine = "--machine" in (argv if argv is not None else sys.argv[1:])
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None) and machine:
            json.dump({"code": "usage", "message": "argument parsing failed"}, sys.stdout)
            sys.stdout.write("\n")
            return 2
        return 0 if exc.code in (0, None) else 2
    try:
        if args.cmd == "sturmian" and args.detect:
            missing = [k for k in ("group", "a", "b") if getattr(args, k) is None]
            if missing:
                raise UsageError("sturmian --detect needs --group, --A, --B")
        return args.fn(args)
    except UsageError as exc:
        _error(args.machine, "usage", str(exc))
        return 2
    except SearchBudgetError as exc:
        _error(args.machine, exc.code, str(exc))
        return 3
    except CritlabError as exc:
        _error(args.machine, exc.code, str(exc))
        return 1


def _error(machine: bool, code: str, message: str) -> None:
    if machine:
        json.dump({"code": code, "message": message}, sys.stdout)
        sys.stdout.write("\n")
    else:
        print(f"error [{code}]: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
