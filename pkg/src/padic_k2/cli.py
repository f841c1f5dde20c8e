"""Command line front end: table scans, the Deng-Li verifier and golden replay.

Exit codes: 0 ok, 1 golden mismatch, 2 precision failure, 3 contradiction,
4 bad arguments.
"""
import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .arith import is_prime, is_squarefree
from .characters import cubic_field_instances
from .errors import ArtifactError, ContradictionDetected, NotDengLi, PrecisionError
from .invariants import EQUALITY, FieldDescriptor, analyze

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PRECISION = 2
EXIT_CONTRADICTION = 3
EXIT_BAD_ARGS = 4

JOBS_ENV = "PADIC_K2_JOBS"
COLUMNS = ("field", "p", "vT", "vK2", "vR2", "C", "verdict", "n_used", "stable", "source_checks")


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_ARGS, f"{self.prog}: error: {message}\n")


# one unit of work per field; runs in worker processes


def _work(task):
    kind, key, p, schedule, higher_n = task
    try:
        if kind == "quadratic":
            fd = FieldDescriptor.quadratic(key)
        elif kind == "cubic":
            f, idx = key
            fd = FieldDescriptor.cubic(cubic_field_instances(f)[idx])
        else:
            fd = FieldDescriptor.degree_p(key, p)
        return "ok", analyze(fd, p, schedule, higher_n).to_json()
    except PrecisionError as exc:
        return "precision", {"task": [kind, key, p], "error": str(exc)}
    except ContradictionDetected as exc:
        return "contradiction", {"task": [kind, key, p], "error": str(exc)}


def _run(tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [_work(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_work, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))


def _unstable_row(info):
    kind, key, p = info["task"]
    fj = {"kind": kind}
    if kind == "quadratic":
        fj["m"] = key
    elif kind == "cubic":
        fj["f"] = key[0]
    else:
        fj["ell"] = key
    return {
        "field": fj, "p": p, "vT": None, "vK2": None, "vR2": None, "C": None,
        "verdict": "na", "n_used": 0, "stable": False, "source_checks": {"error": info["error"]},
    }


# formatting


def _tsv_cell(x):
    if x is None:
        return ""
    if isinstance(x, (dict, list)):
        return json.dumps(x, sort_keys=True, separators=(",", ":"))
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def _order(p, v):
    return "?" if v is None else str(p ** v)


def _paper_line(row):
    f, p = row["field"], row["p"]
    sc = row["source_checks"]
    if not row["stable"] and row["vT"] is None and row["vK2"] is None:
        return f"{_field_label(f)}  unstable: {sc.get('error', '')}"
    verdict = {"equality": "Equality", "inequality": "Inequality"}.get(row["verdict"], "")
    if sc.get("exceptional"):
        return f"{_field_label(f)}  v_{p}(K_2Z)={row['vK2']}  exceptional"
    if f["kind"] == "quadratic" and p == 2:
        return (f"m={f['m']} c={sc.get('c')} v_2(T)={row['vT']} v_2(R_2Z)={row['vR2']} "
                f"C={row['C']} {verdict}")
    if f["kind"] == "quadratic":
        return f"m={f['m']} v_{p}(K_2Z)={row['vK2']} v_{p}(T)={row['vT']} cong={sc.get('congruence')}"
    if f["kind"] == "cubic":
        poly = _poly_text(f["poly"])
        if p == 3:
            return (f"f={f['f']} P={poly} #K_2Z={_order(3, row['vK2'])} #T={_order(3, row['vT'])} "
                    f"C(s)={row['C']} {verdict}")
        return (f"f={f['f']} P={poly} #R_2Z={_order(2, row['vR2'])} #T={_order(2, row['vT'])} "
                f"cong={sc.get('congruence')}")
    line = f"p={p} ell={f['ell']} v(T)={row['vT']} v(K_2Z)={row['vK2']}"
    if "higher_k" in sc:
        line += f" v(K_(2m-2)Z)={sc['higher_k']}"
    return line


def _field_label(f):
    return " ".join(f"{k}={v}" for k, v in f.items() if k != "kind" and k != "poly")


def _poly_text(coeffs):
    from .characters import format_poly

    return format_poly(tuple(coeffs))


def render(rows, fmt):
    if fmt == "json":
        return json.dumps(rows, sort_keys=False, indent=1) + "\n"
    if fmt == "tsv":
        lines = ["\t".join(COLUMNS)]
        lines += ["\t".join(_tsv_cell(r[c]) for c in COLUMNS) for r in rows]
        return "\n".join(lines) + "\n"
    return "".join(_paper_line(r) + "\n" for r in rows)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# commands


def _schedule(args):
    vals = (args.n0, args.n_max, args.guard)
    if all(v is None for v in vals):
        return None
    if any(v is None for v in vals):
        raise SystemExit(_bad("--n0, --n-max and --guard go together"))
    if not 0 <= args.n0 <= args.n_max:
        raise SystemExit(_bad("need 0 <= n0 <= n_max"))
    return vals


def _bad(msg):
    print(f"padic-k2: error: {msg}", file=sys.stderr)
    return EXIT_BAD_ARGS


def _check_range(lo, hi, name):
    if lo > hi:
        raise SystemExit(_bad(f"empty range {name}: {lo} > {hi}"))


def _tasks_quadratic(args, schedule):
    _check_range(args.m_from, args.m_to, "m")
    ms = [m for m in range(max(args.m_from, 2), args.m_to + 1) if is_squarefree(m)]
    return [("quadratic", m, args.p, schedule, None) for m in ms]


def _tasks_cubic(args, schedule):
    _check_range(args.f_from, args.f_to, "f")
    out = []
    for f in range(max(args.f_from, 7), args.f_to + 1):
        for i in range(len(cubic_field_instances(f))):
            out.append(("cubic", (f, i), args.p, schedule, None))
    return out


def _tasks_degree_p(args, schedule):
    if args.p < 3 or not is_prime(args.p):
        raise SystemExit(_bad("--p must be a prime >= 3"))
    _check_range(args.ell_from, args.ell_to, "ell")
    ells = [ell for ell in range(args.ell_from, args.ell_to + 1) if ell % args.p == 1 and is_prime(ell)]
    return [("degree_p", ell, args.p, schedule, args.higher_n) for ell in ells]


def cmd_scan(args, make_tasks):
    tasks = make_tasks(args, _schedule(args))
    results = _run(tasks, args.jobs)
    rows, code = [], EXIT_OK
    for status, payload in results:
        if status == "ok":
            rows.append(payload)
        elif status == "precision":
            print(f"precision failure: {payload['task']}: {payload['error']}", file=sys.stderr)
            if args.allow_unstable:
                rows.append(_unstable_row(payload))
            else:
                code = max(code, EXIT_PRECISION)
        else:
            print(f"contradiction: {payload['task']}: {payload['error']}", file=sys.stderr)
            code = EXIT_CONTRADICTION
    _emit(render(rows, args.format), args.out)
    return code


def cmd_dengli(args):
    from .dengli import dengli_report, dengli_search

    if args.m is not None:
        ms = [args.m]
    else:
        if args.n is None or args.bound is None:
            return _bad("give --m, or --n with --bound")
        if args.n < 2 or args.n % 2:
            return _bad("--n must be even and >= 2")
        ms = dengli_search(args.n, args.bound)
    reports, code = [], EXIT_OK
    for m in ms:
        try:
            reports.append(dengli_report(m, _schedule(args)))
        except NotDengLi as exc:
            return _bad(str(exc))
        except ContradictionDetected as exc:
            print(f"m={m}: {exc}", file=sys.stderr)
            code = EXIT_CONTRADICTION
        except PrecisionError as exc:
            print(f"m={m}: {exc}", file=sys.stderr)
            code = max(code, EXIT_PRECISION)
    if args.format == "json":
        text = json.dumps([r.to_json() for r in reports], indent=1) + "\n"
    else:
        text = "candidates " + json.dumps(ms) + "\n"
        for r in reports:
            K2 = r.predicted["K2"]
            text += (f"m={r.m} primes={r.primes} rank={r.matrix_rank} h={r.h} v_2(h)={r.h2_valuation} "
                     f"vT={r.vT} vT_formula={r.vT_formula} unit={r.unit_shape} "
                     f"#K_2Z[2^oo]=2^{K2} C={r.C} {'Equality' if r.verdict == EQUALITY else r.verdict}\n")
            text += r.relation_line() + "\n"
    _emit(text, args.out)
    return code


def cmd_verify_golden(args):
    from .golden import TABLES, discrepancy, verify_golden

    tables = args.tables.split(",") if args.tables else None
    if tables and any(t not in TABLES for t in tables):
        return _bad(f"unknown table; choose from {','.join(TABLES)}")
    count = [0]
    known = []

    def progress(row, obs):
        count[0] += 1
        d = discrepancy(row)
        if d and obs == d.observed:
            known.append(f"{row.source}: printed {row.want}, observed {obs} ({d.reason})")
            status = "known discrepancy"
        else:
            status = "ok" if obs == row.want else "MISMATCH"
        if args.verbose:
            print(f"{row.source}: {status}", flush=True)

    try:
        bad = verify_golden(tables, include_slow=args.all, progress=progress)
    except PrecisionError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PRECISION
    except ContradictionDetected as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONTRADICTION
    for b in bad:
        print(f"MISMATCH {b}")
    for line in known:
        print(f"KNOWN {line}")
    print(f"{count[0]} rows replayed, {len(bad)} mismatches, {len(known)} known discrepancies")
    return EXIT_MISMATCH if bad else EXIT_OK


def _default_jobs():
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser():
    ap = ArgumentParser(prog="padic-k2", description="p-adic L-function scans of K2 and torsion invariants.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    def common(sp, precision=True):
        sp.add_argument("--format", choices=("json", "tsv", "paper-text"), default="paper-text")
        sp.add_argument("--out", help="write to this file instead of stdout")
        if precision:
            sp.add_argument("--n0", type=int, help="first level of the precision schedule")
            sp.add_argument("--n-max", type=int, help="last level of the precision schedule")
            sp.add_argument("--guard", type=int, help="valuation headroom required at a level")

    def scan(sp):
        common(sp)
        sp.add_argument("--jobs", type=int, default=_default_jobs(), help=f"worker processes (env {JOBS_ENV})")
        sp.add_argument("--allow-unstable", action="store_true", help="keep unstable rows instead of failing")

    sq = sub.add_parser("scan-quadratic", help="real quadratic fields Q(sqrt m)")
    sq.add_argument("--p", type=int, choices=(2, 3), required=True)
    sq.add_argument("--m-from", type=int, required=True)
    sq.add_argument("--m-to", type=int, required=True)
    scan(sq)
    sq.set_defaults(func=lambda a: cmd_scan(a, _tasks_quadratic))

    sc = sub.add_parser("scan-cubic", help="cyclic cubic fields by conductor")
    sc.add_argument("--p", type=int, choices=(2, 3), required=True)
    sc.add_argument("--f-from", type=int, required=True)
    sc.add_argument("--f-to", type=int, required=True)
    scan(sc)
    sc.set_defaults(func=lambda a: cmd_scan(a, _tasks_cubic))

    sd = sub.add_parser("scan-degree-p", help="cyclic fields of degree p and prime conductor")
    sd.add_argument("--p", type=int, required=True)
    sd.add_argument("--ell-from", type=int, required=True)
    sd.add_argument("--ell-to", type=int, required=True)
    sd.add_argument("--higher-n", type=int, help="also compute v(K_(2m-2)) with m = 2 + (p-3) p^n")
    scan(sd)
    sd.set_defaults(func=lambda a: cmd_scan(a, _tasks_degree_p))

    dl = sub.add_parser("dengli", help="verify the Deng-Li family")
    dl.add_argument("--m", type=int)
    dl.add_argument("--n", type=int)
    dl.add_argument("--bound", type=int)
    common(dl)
    dl.set_defaults(func=cmd_dengli)

    vg = sub.add_parser("verify-golden", help="replay the frozen table rows")
    vg.add_argument("--tables", help="comma separated subset, e.g. B1,C2")
    vg.add_argument("--all", action="store_true", help="include rows that take minutes")
    vg.add_argument("-v", "--verbose", action="store_true")
    vg.set_defaults(func=cmd_verify_golden)
    return ap


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code
    except PrecisionError as exc:
        print(f"padic-k2: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ContradictionDetected as exc:
        print(f"padic-k2: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except (ArtifactError, ValueError) as exc:
        print(f"padic-k2: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS


if __name__ == "__main__":
    sys.exit(main())
