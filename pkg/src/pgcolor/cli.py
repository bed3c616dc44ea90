"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 usage error, 3 search budget
exhausted.  ``PGCOLOR_BUDGET`` sets the default node budget for searches.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

import numpy as np

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _default_budget() -> int:
    raw = os.environ.get("PGCOLOR_BUDGET", "2000000")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PGCOLOR_BUDGET={raw!r} is not an integer") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2) if not isinstance(obj, str) else obj)


def _save(env: dict, path: str | None) -> None:
    from .certificates import write_envelope

    if path:
        write_envelope(env, path)
        print(f"wrote {path}")


def _verdict_exit(verdict) -> int:
    print(("OK: " if verdict else "FAILED: ") + verdict.message)
    return EXIT_OK if verdict else EXIT_FALSE


# -- handlers ---------------------------------------------------------------------

def cmd_field(a) -> int:
    from .field import build_field

    f = build_field(a.p, a.m, tuple(a.poly) if a.poly else None)
    d = f.describe()
    d["order"] = f.order
    _emit(d)
    return EXIT_OK


def cmd_space(a) -> int:
    from .space import build_space

    s = build_space(a.n, a.q, a.model)
    d = s.describe()
    d.update(points=s.v, lines=s.num_lines, linesPerPoint=s.lines_per_point)
    _emit(d)
    return EXIT_OK


def cmd_orbits(a) -> int:
    from .orbits import orbit_partition
    from .space import build_space

    part = orbit_partition(build_space(a.n, a.q))
    if a.json:
        _emit(part.to_json())
    else:
        print(f"{len(part.short)} short orbit(s) of length {[len(o) for o in part.short]}, "
              f"{len(part.full)} full orbit(s) of length {part.v}")
    return EXIT_OK


def _outcome_exit(out, what: str) -> int:
    if out.status == "found":
        return EXIT_OK
    if out.status == "exhausted":
        print(f"{what}: budget exhausted after {out.nodes} nodes")
        return EXIT_BUDGET
    print(f"{what}: search space exhausted after {out.nodes} nodes, no solution exists")
    return EXIT_FALSE


def cmd_spread_search(a) -> int:
    from .certificates import export_certificate
    from .space import build_space
    from .spreads import search_spread

    space = build_space(a.n, a.q)
    contains = [tuple(int(x) for x in c.split(",")) for c in a.contains]
    out = search_spread(space, contains, a.profile, a.budget, a.seed)
    code = _outcome_exit(out, "spread search")
    if code == EXIT_OK:
        print(f"spread of {len(out.solution)} lines after {out.nodes} nodes")
        for l in space.lines_of(out.solution):
            print(" ", l)
        _save(export_certificate((space, out.solution), kind="spread"), a.output)
    return code


def cmd_parallelism_search(a) -> int:
    from .certificates import export_certificate
    from .space import build_space
    from .spreads import search_parallelism

    space = build_space(a.n, a.q)
    out = search_parallelism(space, a.group_order, a.budget, a.seed, a.restarts)
    code = _outcome_exit(out, "parallelism search")
    if code == EXIT_OK:
        print(f"{len(out.solution)} spreads after {out.nodes} nodes")
        _save(export_certificate((space, out.solution), kind="parallelism"), a.output)
    elif out.status == "exhausted":
        from .spreads import verify_spread

        placed = out.frontier or []
        good = sum(bool(verify_spread(space, sp)) for sp in placed)
        print(f"partial: {len(placed)} spreads placed, {good} verified")
    return code


def cmd_property_e(a) -> int:
    from .certificates import export_certificate, import_certificate
    from .property_e import expand_base_spread, load_dataset, render_table, verify_property_e
    from .space import build_space
    from .spreads import search_spread

    if a.action == "build":
        space = build_space(3, a.q)
        out = search_spread(space, profile="withE", budget=a.budget, seed=a.seed)
        code = _outcome_exit(out, "withE spread search")
        if code != EXIT_OK:
            return code
        cert = expand_base_spread(space, out.solution)
    elif a.file:
        cert = import_certificate(a.file)
    else:
        cert = load_dataset(a.q)
    if a.action == "show":
        for row in render_table(cert):
            print(row)
        return EXIT_OK
    v = verify_property_e(cert)
    code = _verdict_exit(v)
    if v:
        _save(export_certificate(cert), a.output)
    return code


def cmd_tpg(a) -> int:
    from .tpg import build_tpg, resolve_tpg, verify_resolution, verify_td

    td = build_tpg(a.n, a.q)
    if a.action == "build":
        v = verify_td(td)
        payload = {"k": td.k, "m": td.m, "blocks": td.blocks.tolist()}
    else:
        res = resolve_tpg(td, a.n, a.q)
        v = verify_resolution(td, res)
        payload = {"k": td.k, "m": td.m, "classes": [td.blocks[c].tolist() for c in res.classes]}
    code = _verdict_exit(v)
    if a.output:
        with open(a.output, "w") as fh:
            json.dump(payload, fh)
        print(f"wrote {a.output}")
    return code


def _level_inputs(full_path: str, ipg_path: str):
    from .certificates import import_certificate
    from .construction import LevelInputs

    full = import_certificate(full_path)
    ipg = import_certificate(ipg_path)
    if ipg.property_r is None:
        raise UsageError(f"{ipg_path} carries no property R claim")
    return LevelInputs(full.coloring, ipg.property_r)


def cmd_color(a) -> int:
    from .certificates import ColoringCertificate, export_certificate, import_certificate
    from .coloring import target_chromatic_index

    if a.action == "verify":
        return cmd_verify(a)
    if a.action == "search-pg4":
        from .pg4search import search_ipg4_certificate, search_pg4_coloring

        if a.ipg:
            out = search_ipg4_certificate(a.q, a.budget, a.seed)
        else:
            out = search_pg4_coloring(a.q, a.palette, a.budget, a.seed)
        if out.status == "infeasible":
            print(f"palette {a.palette} is below the counting bound: no coloring exists")
            return EXIT_FALSE
        if not out.found:
            fr = out.frontier
            print(f"budget exhausted after {out.nodes} moves; best assignment has {fr['conflicts']} "
                  f"conflicts, {fr['colored']} lines colored properly")
            return EXIT_BUDGET
        cert = ColoringCertificate(out.solution) if not a.ipg else ColoringCertificate(
            out.solution.coloring, out.solution)
        print(f"found a proper coloring with palette {cert.coloring.palette} after {out.nodes} moves")
        _save(export_certificate(cert), a.output)
        return EXIT_OK

    # recurse
    from .construction import LevelInputs, base_inputs, recursive_color
    from .property_e import load_dataset

    cert_e = import_certificate(a.property_e) if a.property_e else load_dataset(a.q)
    base = even = None
    if a.base_cert:
        obj = import_certificate(a.base_cert)
        if isinstance(obj, ColoringCertificate):
            if obj.property_r is None:
                raise UsageError(f"{a.base_cert} carries no property R claim")
            base = LevelInputs(obj.coloring, obj.property_r)
        elif isinstance(obj, tuple) and a.n % 2:
            base = base_inputs(a.q, obj[1], obj[0])
        else:
            raise UsageError(f"{a.base_cert} is not a usable starting certificate")
    if a.n % 2 == 0:
        if base is not None:
            even, base = base, None
        elif a.pg4_cert and a.ipg4_cert:
            even = _level_inputs(a.pg4_cert, a.ipg4_cert)
        else:
            raise UsageError("even n needs --pg4-cert and --ipg4-cert, or --base-cert")
    res = recursive_color(a.n, a.q, cert_e, base=base, even_base=even)
    for name, v in res.audits.items():
        print(f"  {name}: {v.message}")
    print(f"PG({a.n},{a.q}) colored with {res.coloring.palette} = c({a.n},{a.q}) = "
          f"{target_chromatic_index(a.n, a.q)} colors")
    _save(export_certificate(ColoringCertificate(res.coloring, res.property_r), budget=res.budget.to_json()),
          a.output)
    return EXIT_OK


def cmd_verify(a) -> int:
    from .certificates import read_envelope, verify_envelope
    from .spreads import verify_parallelism

    env = read_envelope(a.file)
    obj, v = verify_envelope(env)
    # an odd-dimensional coloring of every line with c(n,q) colors is a parallelism
    if v and env["kind"] == "coloring" and obj.space.n % 2 and (obj.coloring.colors >= 0).all():
        pv = verify_parallelism(obj.space, obj.coloring.classes())
        if pv:
            v.message = f"{pv.message}; {v.message}"
    return _verdict_exit(v)


def cmd_export(a) -> int:
    from .certificates import export_certificate
    from .property_e import load_dataset

    if a.what == "property-e":
        env = export_certificate(load_dataset(a.q))
    else:
        from .construction import base_parallelism

        space, par = base_parallelism(a.q, a.budget, a.seed)
        env = export_certificate((space, par), kind="parallelism")
    if a.output:
        _save(env, a.output)
    else:
        from .certificates import canonical_json

        print(canonical_json(env))
    return EXIT_OK


def cmd_import(a) -> int:
    from .certificates import import_certificate, read_envelope

    import_certificate(a.file)
    env = read_envelope(a.file)
    print(f"OK: {env['kind']} certificate for {env['space']} verified (hash {env['contentHash'][:16]}...)")
    return EXIT_OK


def cmd_datasets(a) -> int:
    from .property_e import SUPPORTED_Q, dataset_hash

    for q in SUPPORTED_Q:
        print(f"property_e_q{q}.txt  sha256={dataset_hash(f'property_e_q{q}.txt')}")
    print(f"property_e_q2_table.txt  sha256={dataset_hash('property_e_q2_table.txt')}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 2 without SystemExit noise in tests
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pgcolor", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    budget = _default_budget()

    def nq(sp, n=True):
        if n:
            sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)

    def search_opts(sp):
        sp.add_argument("--budget", type=int, default=budget)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("-o", "--output")

    s = sub.add_parser("field", help="describe GF(p^m)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--poly", type=int, nargs="+", help="coefficients, low degree first")
    s.set_defaults(func=cmd_field)

    s = sub.add_parser("space", help="point and line counts of PG(n,q)")
    nq(s)
    s.add_argument("--model", choices=["singer", "product"], default="singer")
    s.set_defaults(func=cmd_space)

    s = sub.add_parser("orbits", help="Singer line orbits")
    nq(s)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("spread-search", help="find a spread")
    nq(s)
    s.add_argument("--profile", choices=["withE"], default=None)
    s.add_argument("--contains", action="append", default=[], help="a line as comma-separated points")
    search_opts(s)
    s.set_defaults(func=cmd_spread_search)

    s = sub.add_parser("parallelism-search", help="find a parallelism")
    nq(s)
    s.add_argument("--group-order", type=int, default=None)
    s.add_argument("--restarts", type=int, default=0)
    search_opts(s)
    s.set_defaults(func=cmd_parallelism_search)

    s = sub.add_parser("property-e", help="property E families")
    s.add_argument("action", choices=["verify", "build", "show"])
    nq(s, n=False)
    s.add_argument("--builtin", action="store_true", help="use the bundled dataset (default)")
    s.add_argument("--file")
    search_opts(s)
    s.set_defaults(func=cmd_property_e)

    s = sub.add_parser("tpg", help="TPG(n,q) and its resolution")
    s.add_argument("action", choices=["build", "resolve"])
    nq(s)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_tpg)

    s = sub.add_parser("color", help="colorings")
    s.add_argument("action", choices=["recurse", "verify", "search-pg4"])
    s.add_argument("file", nargs="?")
    s.add_argument("--n", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--palette", type=int)
    s.add_argument("--ipg", action="store_true", help="search-pg4: look for an IPG(4,q;2) certificate")
    s.add_argument("--property-e", help="property E certificate file (default: bundled)")
    s.add_argument("--base-cert", help="PG(3,q) parallelism, or a lower-level coloring with property R")
    s.add_argument("--pg4-cert")
    s.add_argument("--ipg4-cert")
    search_opts(s)
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("verify", help="verify any certificate file")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export", help="write a bundled or searched certificate")
    s.add_argument("what", choices=["property-e", "parallelism"])
    nq(s, n=False)
    search_opts(s)
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("import", help="import and re-verify a certificate")
    s.add_argument("file")
    s.set_defaults(func=cmd_import)

    s = sub.add_parser("datasets", help="list bundled datasets and their hashes")
    s.set_defaults(func=cmd_datasets)
    return p


def _check_color_args(a) -> None:
    if a.command != "color":
        return
    if a.action == "verify" and not a.file:
        raise UsageError("color verify needs a FILE")
    if a.action in ("recurse", "search-pg4") and a.q is None:
        raise UsageError(f"color {a.action} needs --q")
    if a.action == "recurse" and a.n is None:
        raise UsageError("color recurse needs --n")


def main(argv: Sequence[str] | None = None) -> int:
    from .certificates import CertificateError
    from .construction import ConstructionError
    from .field import FieldError
    from .property_e import DatasetError

    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        _check_color_args(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    np.set_printoptions(linewidth=120)
    try:
        return args.func(args)
    except (UsageError, FieldError, DatasetError, FileNotFoundError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateError as exc:
        print(f"FAILED: {exc}")
        return EXIT_FALSE
    except ConstructionError as exc:
        print(f"FAILED: {exc}")
        return EXIT_FALSE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MemoryError as exc:
        print(f"too large for this machine: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
