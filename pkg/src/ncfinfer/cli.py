"""Command-line surface: file formats, subcommands, and reports.

Subcommands: ``infer`` (per-node fitting NCF sets and a summary table),
``enumerate-ncfs`` (the full NCF catalog for one arity), ``dynamics``
(phase space of one fully specified model), ``sample`` (ensemble
statistics), ``check`` (dual-route inference validation).  All randomness
flows from --seed; reports embed content digests of their inputs; output
files are only written once a run has fully succeeded.
"""

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

from .boolfun import anf_string, anf_to_tt, parse_anf, tt_to_anf
from .dynamics import (
    BooleanNetwork,
    phase_space,
    sample_ensemble,
    trajectory_component_size,
)
from .errors import ParseError, ToolError
from .infer import (
    TimeCourse,
    WiringDiagram,
    count_models,
    cross_check,
    infer_all,
    states_as_ints,
)
from .ncf import enumerate_ncfs


def parse_wiring(text):
    """Wiring file: {"nodes": [names...], "regulators": {name: [names...]}}.

    Node order fixes variable indexing; each regulator list's order fixes
    the input order of that node's local function.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"wiring file is not valid JSON: {e}", line=e.lineno)
    if not isinstance(doc, dict) or "nodes" not in doc or "regulators" not in doc:
        raise ParseError('wiring file needs "nodes" and "regulators" entries')
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise ParseError('"nodes" must be a list of names', field="nodes")
    if len(set(nodes)) != len(nodes):
        dup = sorted(n for n in set(nodes) if nodes.count(n) > 1)
        raise ParseError(f"duplicate node names {dup}", field="nodes")
    regs_doc = doc["regulators"]
    if not isinstance(regs_doc, dict):
        raise ParseError('"regulators" must map node names to name lists',
                         field="regulators")
    index = {n: i for i, n in enumerate(nodes)}
    unknown = sorted(set(regs_doc) - set(nodes))
    if unknown:
        raise ParseError(f"regulators given for unknown nodes {unknown}",
                         field="regulators")
    missing = sorted(set(nodes) - set(regs_doc))
    if missing:
        raise ParseError(f"no regulator list for nodes {missing}",
                         field="regulators")
    regulators = []
    for n in nodes:
        lst = regs_doc[n]
        if not isinstance(lst, list):
            raise ParseError(f"regulator list of {n!r} must be a list", field=n)
        for r in lst:
            if r not in index:
                raise ParseError(f"node {n!r} names absent regulator {r!r}",
                                 field=n)
        regulators.append([index[r] for r in lst])
    try:
        return WiringDiagram(nodes, regulators)
    except (ValueError, ToolError) as e:
        raise ParseError(f"invalid wiring: {e}") from e


def serialize_wiring(wiring):
    return json.dumps(
        {
            "nodes": list(wiring.nodes),
            "regulators": {
                n: list(wiring.regulator_names(i))
                for i, n in enumerate(wiring.nodes)
            },
        },
        indent=2,
    ) + "\n"


def parse_timecourse(text):
    """Time-course file: CSV, header of node names, one 0/1 row per step."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]  # tolerate trailing blank lines
    if len(rows) < 2:
        raise ParseError("time course needs a header and at least one row")
    header = [h.strip() for h in rows[0]]
    states = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(
                f"row has {len(row)} cells, header has {len(header)}",
                line=lineno,
            )
        state = []
        for col, cell in zip(header, row):
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise ParseError(
                    f"cell {cell!r} in column {col!r} is not 0/1",
                    line=lineno, field=col,
                )
            state.append(int(cell))
        states.append(state)
    try:
        return TimeCourse(header, states)
    except ValueError as e:
        raise ParseError(f"invalid time course: {e}") from e


def serialize_timecourse(course):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(course.nodes)
    writer.writerows(course.rows)
    return buf.getvalue()


def parse_rules(text, wiring):
    """Rules file: {"rules": {node: ANF string}}, x_j = node's j-th regulator."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"rules file is not valid JSON: {e}", line=e.lineno)
    rules = doc.get("rules") if isinstance(doc, dict) else None
    if not isinstance(rules, dict):
        raise ParseError('rules file needs a "rules" mapping')
    missing = sorted(set(wiring.nodes) - set(rules))
    if missing:
        raise ParseError(f"no rule for nodes {missing}")
    unknown = sorted(set(rules) - set(wiring.nodes))
    if unknown:
        raise ParseError(f"rules for unknown nodes {unknown}")
    tables = []
    for i, name in enumerate(wiring.nodes):
        arity = len(wiring.regulators[i])
        try:
            tables.append(anf_to_tt(parse_anf(rules[name], arity)))
        except ValueError as e:
            raise ParseError(f"rule for {name!r}: {e}", field=name) from e
    return tables


def _sha256(data):
    return hashlib.sha256(data).hexdigest()


def _read_input(path):
    data = Path(path).read_bytes()
    return data.decode("utf-8"), _sha256(data)


def _json_report(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_outputs(out_dir, outputs):
    # nothing is written unless the whole run succeeded
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, content in outputs.items():
        (out / name).write_text(content)


def _state_bits(n, value):
    return "".join(str((value >> i) & 1) for i in range(n))


def _load_course_args(args):
    courses, digests = [], []
    for p in args.timecourse:
        text, digest = _read_input(p)
        courses.append(parse_timecourse(text))
        digests.append(digest)
    return courses, digests


def _infer_payload(result, digests):
    nodes_payload = []
    for rec in result.nodes:
        space_log2 = (1 << rec.data.arity) - rec.data.distinct_inputs
        nodes_payload.append(
            {
                "name": rec.name,
                "regulators": list(rec.regulators),
                "in_degree": rec.data.arity,
                "distinct_inputs": rec.data.distinct_inputs,
                "model_space_log2": space_log2,
                "model_space_size": rec.space_size,
                "ncf_count": len(rec.ncfs),
                "ncfs": rec.ncfs.anf_lines(),
                "near_misses": [
                    {
                        "anf": anf_string(tt_to_anf(t)),
                        "depends_on": sorted(ess),
                    }
                    for t, ess in rec.near_misses
                ],
                "forced_function": None
                if rec.forced is None
                else anf_string(tt_to_anf(rec.forced)),
            }
        )
    without = [rec.name for rec in result.nodes if len(rec.ncfs) == 0]
    nonzero = 1
    for rec in result.nodes:
        if len(rec.ncfs):
            nonzero *= len(rec.ncfs)
    return {
        "inputs": digests,
        "nodes": nodes_payload,
        "model_count": count_models(result),
        "model_count_nonzero_nodes": nonzero,
        "nodes_without_ncf": without,
    }


def _infer_table(payload):
    headers = ["node", "inputs", "distinct", "|f+I|", "NCFs(k)", "fitting NCFs"]
    rows = [
        [
            n["name"],
            str(n["in_degree"]),
            str(n["distinct_inputs"]),
            str(n["model_space_size"]),
            str(len(enumerate_ncfs(n["in_degree"]))),
            str(n["ncf_count"]),
        ]
        for n in payload["nodes"]
    ]
    widths = [
        max(len(h), *(len(r[c]) for r in rows)) for c, h in enumerate(headers)
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
        "  ".join("-" * w for w in widths),
    ]
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in rows]
    lines.append("")
    lines.append(f"nested canalyzing models (product): {payload['model_count']}")
    if payload["nodes_without_ncf"]:
        lines.append(
            f"nodes with no fitting NCF: {', '.join(payload['nodes_without_ncf'])} "
            "(see near_misses in the JSON report)"
        )
        lines.append(
            "product over nodes with at least one fitting NCF: "
            f"{payload['model_count_nonzero_nodes']}"
        )
    return "\n".join(lines) + "\n"


def cmd_infer(args):
    wiring_text, wiring_digest = _read_input(args.wiring)
    wiring = parse_wiring(wiring_text)
    courses, course_digests = _load_course_args(args)
    result = infer_all(wiring, courses, only=args.node)
    payload = _infer_payload(
        result,
        {"wiring_sha256": wiring_digest, "timecourse_sha256": course_digests},
    )
    table = _infer_table(payload)
    sys.stdout.write(table)
    if args.out:
        _write_outputs(
            args.out,
            {"infer.json": _json_report(payload), "infer.txt": table},
        )
    return 0


def cmd_enumerate(args):
    ncfs = enumerate_ncfs(args.k)
    lines = ncfs.anf_lines()
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        _write_outputs(
            args.out,
            {
                f"ncfs_k{args.k}.txt": "\n".join(lines) + "\n",
                f"ncfs_k{args.k}.json": _json_report(
                    {"arity": args.k, "count": len(ncfs), "ncfs": ncfs.json_records()}
                ),
            },
        )
    return 0


def cmd_dynamics(args):
    wiring_text, wiring_digest = _read_input(args.wiring)
    wiring = parse_wiring(wiring_text)
    rules_text, rules_digest = _read_input(args.rules)
    tables = parse_rules(rules_text, wiring)
    net = BooleanNetwork(wiring, tables)
    space = phase_space(net)
    n = space.n
    payload = {
        "inputs": {"wiring_sha256": wiring_digest, "rules_sha256": rules_digest},
        "states": 1 << n,
        "components": space.component_count,
        "component_sizes": list(space.component_sizes),
        "attractors": [
            [_state_bits(n, s) for s in cycle] for cycle in space.attractors
        ],
    }
    if args.timecourse:
        courses, digests = _load_course_args(args)
        sizes = [
            trajectory_component_size(space, states_as_ints(wiring, c))
            for c in courses
        ]
        payload["inputs"]["timecourse_sha256"] = digests
        payload["trajectory_component_sizes"] = sizes
    sys.stdout.write(
        f"{1 << n} states, {space.component_count} components, "
        f"attractor lengths {[len(c) for c in space.attractors]}\n"
    )
    if args.out:
        _write_outputs(args.out, {"dynamics.json": _json_report(payload)})
    return 0


def _histogram_csv(stats):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["basin_size_low", "basin_size_high", "networks"])
    for b, count in enumerate(stats.histogram):
        writer.writerow([b * stats.bin_width + 1, (b + 1) * stats.bin_width, count])
    return buf.getvalue()


def cmd_sample(args):
    wiring_text, wiring_digest = _read_input(args.wiring)
    wiring = parse_wiring(wiring_text)
    courses, course_digests = _load_course_args(args)
    result = infer_all(wiring, courses)
    stats = sample_ensemble(result, args.samples, args.seed, args.mode)
    payload = {
        "inputs": {"wiring_sha256": wiring_digest, "timecourse_sha256": course_digests},
        "stats": stats.as_dict(),
    }
    sys.stdout.write(
        f"mode={stats.mode} samples={stats.sample_count} seed={stats.seed}\n"
        f"mean components: {stats.mean_components}\n"
        f"mean trajectory component size: {stats.mean_trajectory_component_size}\n"
        f"trajectory not in largest component: "
        f"{stats.count_trajectory_not_in_largest} samples"
        + (
            f" (mean size {stats.mean_size_when_not_largest})"
            if stats.count_trajectory_not_in_largest
            else ""
        )
        + "\n"
    )
    if args.out:
        _write_outputs(
            args.out,
            {
                f"sample_{args.mode}.json": _json_report(payload),
                f"sample_{args.mode}.csv": _histogram_csv(stats),
            },
        )
    return 0


def cmd_check(args):
    wiring_text, _ = _read_input(args.wiring)
    wiring = parse_wiring(wiring_text)
    courses, _ = _load_course_args(args)
    names = [args.node] if args.node else list(wiring.nodes)
    failures = []
    for name in names:
        ok = cross_check(wiring, courses, wiring.index(name))
        sys.stdout.write(f"{name}: {'ok' if ok else 'MISMATCH'}\n")
        if not ok:
            failures.append(name)
    if failures:
        raise ToolError(
            f"dual-route inference disagrees on nodes {failures}",
            nodes=failures,
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ncfinfer",
        description="Infer and analyze nested canalyzing Boolean network models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, timecourse=True, out=True):
        p.add_argument("--wiring", required=True, help="wiring diagram JSON file")
        if timecourse:
            p.add_argument(
                "--timecourse",
                action="append",
                required=True,
                help="time-course CSV file (repeatable)",
            )
        if out:
            p.add_argument("--out", help="directory for report files")

    p = sub.add_parser("infer", help="all fitting NCFs per node")
    add_io(p)
    p.add_argument("--node", help="restrict inference to one node")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("enumerate-ncfs", help="catalog of all NCFs on k inputs")
    p.add_argument("k", type=int)
    p.add_argument("--out", help="directory for report files")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("dynamics", help="phase space of one specified model")
    p.add_argument("--wiring", required=True, help="wiring diagram JSON file")
    p.add_argument("--rules", required=True, help="ANF rules JSON file")
    p.add_argument(
        "--timecourse",
        action="append",
        default=[],
        help="optional time course; reports its component size",
    )
    p.add_argument("--out", help="directory for report files")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("sample", help="ensemble statistics over sampled models")
    add_io(p)
    p.add_argument("--mode", choices=["ncf", "unrestricted"], required=True)
    p.add_argument("--samples", "-m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("check", help="dual-route inference validation")
    add_io(p, out=False)
    p.add_argument("--node", help="restrict the check to one node")
    p.set_defaults(func=cmd_check)

    return parser


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ToolError as e:
        sys.stderr.write(
            _json_report(
                {
                    "error": {
                        "type": type(e).__name__,
                        "message": str(e),
                        **e.context,
                    }
                }
            )
        )
        return 1
    except (ValueError, KeyError, OSError) as e:
        # str(KeyError) wraps its argument in quotes; unwrap for readability
        message = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        sys.stderr.write(
            _json_report({"error": {"type": type(e).__name__, "message": message}})
        )
        return 1


def main():
    sys.exit(run())
