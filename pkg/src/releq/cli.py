"""Command-line interface: ``releq <command> [options]``.

Every command echoes its resolved configuration as the first output line,
``# releq <command> {json}``.  Tabular commands write CSV (10 significant
digits) to ``--out`` or to stdout; scalar commands print ``name value units``
lines and, with ``--out``, also write the CSV table ``quantity,value,units``.
Validation errors exit with status 2 and a one-line diagnostic on stderr.

Physical constants (CODATA, 6 significant digits): hbar = 1.05457e-34 J s,
k_B = 1.38065e-23 J/K, c = 2.99792e8 m/s, proton mass = 1.67262e-27 kg.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from typing import Sequence

import numpy as np

from . import classical_info as ci
from . import entanglement as ent
from . import protocols as pr
from . import qalgo as qa
from . import qchannel as qc
from . import qentropy as qe
from . import qstate as qs
from .constants import C_LIGHT, M_PROTON
from .errors import ReleqError
from .matcore import matrix_from_json, matrix_to_json

LN2 = math.log(2.0)


class CliError(ReleqError):
    """Bad flag combination detected after parsing."""


# --------------------------------------------------------------------------
# Output helpers


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.10g" % float(v)
    return str(v)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".releq-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def header_line(config: dict) -> str:
    return f"# releq {config['command']} {json.dumps(config, sort_keys=True)}\n"


def render_csv(rows: Sequence[dict], fieldnames: Sequence[str], config: dict | None = None) -> str:
    buf = io.StringIO()
    if config is not None:
        buf.write(header_line(config))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        if set(row) != set(fieldnames):
            raise CliError(f"row keys {sorted(row)} do not match header {list(fieldnames)}")
        writer.writerow([_fmt(row[f]) for f in fieldnames])
    return buf.getvalue()


def emit_csv(rows: Sequence[dict], path: str | None, fieldnames: Sequence[str], config: dict | None = None) -> str:
    """Write ``rows`` as CSV to ``path`` atomically, or return the text if ``path`` is None.

    An empty ``rows`` gives a header-only file.
    """
    text = render_csv(rows, fieldnames, config)
    if path is not None:
        _atomic_write(path, text)
    return text


def _svg_polyline(xs, ys, title: str) -> str:
    """Minimal SVG line plot scaled to a 400x300 box."""
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    w, h, m = 400, 300, 30
    xr = (xs.max() - xs.min()) or 1.0
    yr = (ys.max() - ys.min()) or 1.0
    px = m + (xs - xs.min()) / xr * (w - 2 * m)
    py = h - m - (ys - ys.min()) / yr * (h - 2 * m)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">\n'
        f'<title>{title}</title>\n'
        f'<rect x="{m}" y="{m}" width="{w - 2 * m}" height="{h - 2 * m}" fill="none" stroke="#999"/>\n'
        f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>\n'
        f'<text x="{m}" y="{m - 8}" font-size="11">y: {ys.min():.4g} .. {ys.max():.4g}; '
        f'x: {xs.min():.4g} .. {xs.max():.4g}</text>\n'
        "</svg>\n"
    )


# --------------------------------------------------------------------------
# Input helpers


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_state(path: str):
    return qs.density_from_json(_load_json(path))


def _to_units(bits: float, units: str) -> float:
    return bits if units == "bits" else bits * LN2


# --------------------------------------------------------------------------
# Commands.  Each returns (rows, fieldnames, scalar) where ``scalar`` selects
# the human-readable ``name value units`` output.


def cmd_entropy(a):
    rho, dims = _load_state(a.state)
    rows = [{"quantity": "von_neumann", "value": qe.von_neumann(rho, a.units), "units": a.units}]
    if len(dims) == 2:
        rows.append({"quantity": "mutual_information", "value": qe.qmutual(rho, dims, a.units), "units": a.units})
        rows.append(
            {"quantity": "conditional_entropy", "value": qe.conditional_qentropy(rho, dims, a.units), "units": a.units}
        )
        w = np.linalg.eigvalsh(rho)
        if w[-1] > 1 - 1e-9:
            psi = np.linalg.eigh(rho)[1][:, -1]
            rows.append(
                {"quantity": "entanglement", "value": ent.pure_entanglement(psi, dims, a.units), "units": a.units}
            )
    return rows, ["quantity", "value", "units"], True


def cmd_holevo(a):
    e = qe.ensemble_from_json(_load_json(a.ensemble))
    rows = [{"quantity": "holevo", "value": qe.holevo(e, a.units), "units": a.units}]
    if a.povm:
        effects = [matrix_from_json(m) for m in _load_json(a.povm)["effects"]]
        rows.append({"quantity": "accessible_info", "value": qe.accessible_info(e, effects, a.units), "units": a.units})
    return rows, ["quantity", "value", "units"], True


def cmd_ree(a):
    rho, dims = _load_state(a.state)
    res = ent.ree(
        rho,
        dims,
        components=a.components,
        restarts=a.restarts,
        max_iters=a.max_iters,
        tol=a.tol,
        seed=a.seed,
        units=a.units,
    )
    if a.dump_closest:
        _atomic_write(a.dump_closest, json.dumps(qs.density_to_json(res.closest_state, dims)) + "\n")
    rows = [
        {"quantity": "ree", "value": res.value, "units": a.units},
        {"quantity": "converged", "value": bool(res.converged), "units": "flag"},
        {"quantity": "iterations", "value": res.iterations, "units": "count"},
        {"quantity": "restarts_used", "value": res.restarts_used, "units": "count"},
    ]
    return rows, ["quantity", "value", "units"], True


def cmd_channel(a):
    ch = qc.KrausChannel.from_json(_load_json(a.channel))
    if a.action == "dilate":
        dil = ch.dilate()
        obj = {"unitary": matrix_to_json(dil.unitary), "ancilla": qs.ket_to_json(dil.ancilla_state, [dil.ancilla_dim])}
        return _json_result(a, obj)
    if not a.state:
        raise CliError(f"channel {a.action} needs --state")
    rho, dims = _load_state(a.state)
    out = ch.apply(rho)
    if a.action == "apply":
        return _json_result(a, qs.density_to_json(out, dims))
    return _ppt_rows(out, dims)


def _json_result(a, obj):
    text = json.dumps(obj) + "\n"
    if a.out:
        _atomic_write(a.out, text)
        return [], None, False
    return text, None, False


def _ppt_rows(rho, dims):
    res = qc.ppt_check(rho, dims)
    rows = [
        {"quantity": "min_eigenvalue", "value": res.min_eig, "units": "none"},
        {"quantity": "is_ppt", "value": res.is_ppt, "units": "flag"},
        {"quantity": "conclusive", "value": res.conclusive, "units": "flag"},
    ]
    return rows, ["quantity", "value", "units"], True


def cmd_ppt(a):
    rho, dims = _load_state(a.state)
    return _ppt_rows(rho, dims)


def cmd_sanov(a):
    q = np.array(a.q, dtype=float)
    cands = [np.array(c, dtype=float) for c in a.candidate]
    p_star, d_min = ci.sanov_exponent(q, cands, units="bits")
    rows = []
    for n in range(1, a.n_max + 1):
        bound = 2.0 ** (-n * d_min)
        rows.append({"n": n, "exponent": _to_units(d_min, a.units), "bound": bound, "p_star": " ".join(_fmt(x) for x in p_star)})
    return rows, ["n", "exponent", "bound", "p_star"], False


def cmd_types(a):
    if a.sequence is not None:
        rec = ci.type_of(list(a.sequence))
        rows = [{"symbol": s, "count": c, "fraction": c / rec.n} for s, c in zip(rec.alphabet, rec.counts)]
        rows.append({"symbol": "class_size", "count": rec.class_size, "fraction": float("nan")})
        return rows, ["symbol", "count", "fraction"], False
    if a.q is None or a.p is None:
        raise CliError("types needs --sequence or both --q and --p")
    q, p = np.array(a.q, float), np.array(a.p, float)
    rows = []
    for n in a.n:
        r = ci.type_class_prob(q, p, n)
        rows.append({"n": n, "exact": r.exact, "lower": r.lower, "upper": r.upper})
    return rows, ["n", "exact", "lower", "upper"], False


def cmd_compress(a):
    rows = []
    for n in a.n:
        r = pr.schumacher_compress(a.theta, n, trials=a.trials, seed=a.seed)
        rows.append(
            {
                "n": n,
                "typical_dim": r.typical_dim,
                "rate": _to_units(r.rate_bits_per_symbol, a.units),
                "entropy": _to_units(r.entropy_bits, a.units),
                "success_mc": r.success_prob,
                "success_exact": r.success_prob_exact,
            }
        )
    return rows, ["n", "typical_dim", "rate", "entropy", "success_mc", "success_exact"], False


def cmd_teleport(a):
    rng = np.random.default_rng(a.seed)
    rows = []
    for t in range(a.trials):
        psi = qs.random_state(2, rng)
        out = pr.teleport(psi, rng)
        rows.append(
            {
                "trial": t,
                "m1": out.classical_bits[0],
                "m2": out.classical_bits[1],
                "probability": out.probability,
                "fidelity": out.fidelity_to_input,
            }
        )
    return rows, ["trial", "m1", "m2", "probability", "fidelity"], False


def cmd_dense_curve(a):
    if a.points < 2:
        raise CliError("--points must be at least 2")
    xs = np.linspace(0.0, 1.0, a.points)
    rows = [{"x": float(x), "C": _to_units(pr.dense_coding_capacity(float(x)), a.units)} for x in xs]
    if a.svg:
        _atomic_write(a.svg, _svg_polyline(xs, [r["C"] for r in rows], "dense coding capacity"))
    return rows, ["x", "C"], False


def cmd_landauer(a):
    rho, _ = _load_state(a.rho)
    omega, _ = _load_state(a.omega)
    c = pr.landauer_erasure(rho, omega, a.units)
    rows = [
        {"quantity": "delta_s", "value": c.delta_s, "units": a.units},
        {"quantity": "relative_entropy", "value": c.relative_entropy, "units": a.units},
        {"quantity": "entropy", "value": c.entropy, "units": a.units},
    ]
    return rows, ["quantity", "value", "units"], True


def cmd_bosonic(a):
    r = qe.bosonic_capacity(a.power, a.temperature)
    u = "bits/s" if a.units == "bits" else "nats/s"
    rows = [
        {"quantity": "capacity", "value": _to_units(r.capacity, a.units), "units": u},
        {"quantity": "classical_limit", "value": _to_units(r.classical_limit, a.units), "units": u},
        {"quantity": "quantum_limit", "value": _to_units(r.quantum_limit, a.units), "units": u},
    ]
    return rows, ["quantity", "value", "units"], True


def cmd_bekenstein(a):
    energy = a.energy if a.energy is not None else M_PROTON * C_LIGHT**2
    bits = pr.bekenstein(energy, a.radius, rigorous=not a.heuristic)
    rate = pr.processing_rate(energy)
    u = a.units
    rows = [
        {"quantity": "max_information", "value": _to_units(bits, u), "units": u},
        {"quantity": "max_rate", "value": _to_units(rate, u), "units": f"{u}/s"},
    ]
    return rows, ["quantity", "value", "units"], True


def cmd_deutsch(a):
    r = qa.deutsch(a.f, purity=a.purity)
    rows = [
        {"quantity": "verdict", "value": r.verdict, "units": "none"},
        {"quantity": "queries", "value": r.queries_used, "units": "count"},
        {"quantity": "holevo_diagnostic", "value": _to_units(r.holevo_diag, a.units), "units": a.units},
    ]
    return rows, ["quantity", "value", "units"], True


def cmd_grover(a):
    tr = qa.grover_trace(a.qubits, a.p, a.kmax)
    rep = qa.step_bound_check(tr)
    rows = []
    for i, s in enumerate(tr.steps):
        ds = rep.rows[i - 1].delta_s if i > 0 else 0.0
        bound = rep.rows[i - 1].bound if i > 0 else 0.0
        rows.append(
            {
                "k": s.k,
                "I_MC": _to_units(s.mutual_info, a.units),
                "S_avg": _to_units(s.s_avg, a.units),
                "delta_S": _to_units(ds, a.units),
                "bound": _to_units(bound, a.units),
            }
        )
    if a.svg:
        _atomic_write(a.svg, _svg_polyline([r["k"] for r in rows], [r["I_MC"] for r in rows], "memory-computer MI"))
    return rows, ["k", "I_MC", "S_avg", "delta_S", "bound"], False


def cmd_bitwise(a):
    tr = qa.bitwise_oracle_trace(a.qubits)
    rows = [{"queries": k, "I_MC": _to_units(v, a.units)} for k, v in enumerate(tr.mutual_info)]
    return rows, ["queries", "I_MC"], False


def cmd_selftest(a):
    from . import selftest

    ok = selftest.run(verbose=True)
    return None, None, ok


COMMANDS = {
    "entropy": cmd_entropy,
    "holevo": cmd_holevo,
    "ree": cmd_ree,
    "channel": cmd_channel,
    "ppt": cmd_ppt,
    "sanov": cmd_sanov,
    "types": cmd_types,
    "compress": cmd_compress,
    "teleport-demo": cmd_teleport,
    "dense-coding-curve": cmd_dense_curve,
    "landauer": cmd_landauer,
    "bosonic": cmd_bosonic,
    "bekenstein": cmd_bekenstein,
    "deutsch": cmd_deutsch,
    "grover-mi": cmd_grover,
    "bitwise-trace": cmd_bitwise,
    "selftest": cmd_selftest,
}


# --------------------------------------------------------------------------
# Parser


def _floats(s: str) -> list[float]:
    try:
        return [float(x) for x in s.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--units", choices=["bits", "nats"], default="bits")
    common.add_argument("--seed", type=int, default=0, help="RNG seed; the RELEQ_SEED variable overrides it")
    common.add_argument("--out", help="write the CSV (or JSON) result here instead of stdout")

    parser = argparse.ArgumentParser(prog="releq", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("entropy", "entropies of a state file")
    p.add_argument("--state", required=True)
    p = add("holevo", "Holevo quantity of an ensemble file")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--povm", help='optional {"effects": [matrix, ...]} for accessible information')
    p = add("ree", "relative entropy of entanglement")
    p.add_argument("--state", required=True)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--components", type=int)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--dump-closest", help="write the closest separable state as JSON")
    p = add("channel", "apply, dilate or PPT-test a Kraus channel")
    p.add_argument("action", choices=["apply", "dilate", "ppt"])
    p.add_argument("--channel", required=True)
    p.add_argument("--state")
    p = add("ppt", "partial-transpose test of a bipartite state")
    p.add_argument("--state", required=True)
    p = add("sanov", "large-deviation exponent over a candidate set")
    p.add_argument("--q", type=_floats, required=True, help="true distribution, e.g. '0.5 0.5'")
    p.add_argument("--candidate", type=_floats, action="append", required=True)
    p.add_argument("--n-max", type=int, default=20)
    p = add("types", "type of a sequence or type-class probability bounds")
    p.add_argument("--sequence")
    p.add_argument("--q", type=_floats)
    p.add_argument("--p", type=_floats)
    p.add_argument("--n", type=int, nargs="+", default=[10, 20, 40])
    p = add("compress", "Schumacher compression of the two-state source")
    p.add_argument("--theta", type=float, default=math.pi / 6)
    p.add_argument("--n", type=int, nargs="+", default=[4, 8, 12, 16])
    p.add_argument("--trials", type=int, default=200)
    p = add("teleport-demo", "teleport random qubits")
    p.add_argument("--trials", type=int, default=10)
    p = add("dense-coding-curve", "dense coding capacity against Schmidt weight")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--svg")
    p = add("landauer", "entropy cost of erasure")
    p.add_argument("--rho", required=True)
    p.add_argument("--omega", required=True)
    p = add("bosonic", "broadband bosonic channel capacity")
    p.add_argument("--power", type=float, required=True, help="signal power in W")
    p.add_argument("--temperature", type=float, required=True, help="background temperature in K")
    p = add("bekenstein", "information and rate limits (defaults: a proton, R = 1e-15 m)")
    p.add_argument("--energy", type=float, help="energy in J (default proton rest energy)")
    p.add_argument("--radius", type=float, default=1e-15)
    p.add_argument("--heuristic", action="store_true", help="drop the 2 pi factor")
    p = add("deutsch", "Deutsch's one-query test")
    p.add_argument("--f", required=True, help="truth table f(0)f(1), e.g. 01")
    p.add_argument("--purity", type=float, default=1.0)
    p = add("grover-mi", "memory-computer mutual information during Grover search")
    p.add_argument("--qubits", type=int, default=4)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--svg")
    p = add("bitwise-trace", "mutual information with a one-bit-per-query oracle")
    p.add_argument("--qubits", type=int, default=4)
    add("selftest", "run the invariant suite")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    env = os.environ.get("RELEQ_SEED")
    if env is not None:
        try:
            args.seed = int(env)
        except ValueError:
            raise CliError(f"RELEQ_SEED must be an integer, got {env!r}") from None
    cfg = {k: v for k, v in vars(args).items()}
    return json.loads(json.dumps(cfg, default=str))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits 2 on unknown flags
    try:
        config = resolve_config(args)
        rows, fields, flag = COMMANDS[args.command](args)
    except (ReleqError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        msg = str(exc) or type(exc).__name__
        print(f"releq {args.command}: {type(exc).__name__}: {msg}".splitlines()[0], file=sys.stderr)
        return 2
    if args.command == "selftest":
        return 0 if flag else 1
    out = sys.stdout
    if fields is None:  # JSON results
        if isinstance(rows, str):
            out.write(header_line(config))
            out.write(rows)
        return 0
    if flag:  # scalar commands: human lines, CSV on request
        out.write(header_line(config))
        for r in rows:
            out.write(f"{r['quantity']} {_human(r['value'])} {r['units']}\n")
        if args.out:
            emit_csv(rows, args.out, fields, config)
        return 0
    text = emit_csv(rows, args.out, fields, config)
    if not args.out:
        out.write(text)
    return 0


def _human(v) -> str:
    if isinstance(v, (float, np.floating)) and not isinstance(v, bool):
        if math.isinf(v):
            return "inf"
        if abs(v) < 5e-13:
            return "0.0000"
        return f"{v:.4f}" if 1e-3 <= abs(v) < 1e6 else f"{v:.4e}"
    return _fmt(v)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
