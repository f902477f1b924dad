"""Invariant suite run by ``releq selftest``.

Each check draws a modest number of seeded random instances and returns
``(passed, detail)``.  The test suite runs the same checks with its own,
larger sweeps; this module is the quick end-user confirmation that an
installation behaves.
"""

from __future__ import annotations

import math
import time
from typing import Callable, NamedTuple

import numpy as np

from . import classical_info as ci
from . import entanglement as ent
from . import matcore as mc
from . import protocols as pr
from . import qalgo as qa
from . import qchannel as qc
from . import qentropy as qe
from . import qstate as qs

CHECKS: list[tuple[str, str, Callable[[], tuple[bool, str]]]] = []


def check(module: str, name: str):
    def deco(fn):
        CHECKS.append((module, name, fn))
        return fn

    return deco


def _rng(tag: int) -> np.random.Generator:
    return np.random.default_rng(20240 + tag)


# -- matcore ---------------------------------------------------------------


@check("matcore", "eigen reconstruction <= 1e-10")
def _eig_recon():
    rng = _rng(1)
    worst = 0.0
    for _ in range(100):
        m = mc.random_hermitian(int(rng.integers(1, 9)), rng)
        worst = max(worst, np.max(np.abs(mc.hermitian_eig(m).reconstruct() - m)))
    return worst <= 1e-10, f"max error {worst:.2e}"


@check("matcore", "tensor associativity")
def _tensor_assoc():
    rng = _rng(2)
    worst = 0.0
    for _ in range(50):
        a, b, c = (mc.random_hermitian(int(rng.integers(1, 4)), rng) for _ in range(3))
        worst = max(worst, np.max(np.abs(mc.tensor(mc.tensor(a, b), c) - mc.tensor(a, mc.tensor(b, c)))))
    return worst <= 1e-12, f"max error {worst:.2e}"


@check("matcore", "partial trace preserves trace")
def _ptrace_trace():
    rng = _rng(3)
    worst = 0.0
    for _ in range(100):
        dims = tuple(int(d) for d in rng.integers(1, 5, size=2))
        m = mc.random_hermitian(dims[0] * dims[1], rng)
        for keep in (0, 1):
            worst = max(worst, abs(np.trace(mc.partial_trace(m, dims, keep)) - np.trace(m)))
    return worst <= 1e-12, f"max error {worst:.2e}"


@check("matcore", "partial transpose keeps trace and Hermiticity")
def _ptrans():
    rng = _rng(4)
    worst = 0.0
    for _ in range(200):
        dims = tuple(int(d) for d in rng.integers(1, 5, size=2))
        m = mc.random_hermitian(dims[0] * dims[1], rng)
        t = mc.partial_transpose(m, dims, 1)
        worst = max(worst, abs(np.trace(t) - np.trace(m)), np.max(np.abs(t - t.conj().T)))
    return worst <= 1e-12, f"max error {worst:.2e}"


# -- classical_info ----------------------------------------------------------


@check("classical_info", "KL >= 0, zero on equal pairs")
def _kl_pos():
    rng = _rng(5)
    bad = 0
    for _ in range(200):
        n = int(rng.integers(2, 6))
        p, q = ci.random_distribution(n, rng), ci.random_distribution(n, rng)
        bad += ci.kl_divergence(p, q) < 0 or ci.kl_divergence(p, p) > 1e-12
    return bad == 0, f"{bad} violations"


@check("classical_info", "KL monotone under stochastic maps")
def _kl_mono():
    rng = _rng(6)
    bad = 0
    for _ in range(200):
        n, m = (int(x) for x in rng.integers(2, 6, size=2))
        p, a = ci.random_distribution(n, rng), ci.random_distribution(n, rng)
        t = ci.random_stochastic(m, n, rng)
        bad += ci.kl_divergence(ci.evolve_stochastic(p, t), ci.evolve_stochastic(a, t)) > ci.kl_divergence(p, a) + 1e-12
    return bad == 0, f"{bad} violations"


@check("classical_info", "mutual information under local maps")
def _mi_local():
    rng = _rng(7)
    bad = 0
    for _ in range(100):
        joint = ci.random_distribution(9, rng).reshape(3, 3)
        ta, tb = ci.random_stochastic(3, 3, rng), ci.random_stochastic(3, 3, rng)
        out = ta @ joint @ tb.T
        bad += ci.mutual_information(out) > ci.mutual_information(joint) + 1e-12
    return bad == 0, f"{bad} violations"


@check("classical_info", "sequence probability depends only on type")
def _theorem2():
    rng = _rng(8)
    worst = 0.0
    for _ in range(200):
        k = int(rng.integers(2, 5))
        q = ci.random_distribution(k, rng) * 0.9 + 0.1 / k
        x = rng.integers(0, k, size=int(rng.integers(1, 40)))
        direct, typed = ci.sequence_prob(q, x)
        worst = max(worst, abs(direct - typed) / direct)
    return worst <= 1e-9, f"max relative gap {worst:.2e}"


@check("classical_info", "type-class size sandwich, binary n <= 20")
def _theorem3():
    bad = 0
    for n in range(1, 21):
        for k in range(n + 1):
            size = math.comb(n, k)
            # exp(nH) = n^n / (k^k (n-k)^(n-k)); compare with integers only
            denom = k**k * (n - k) ** (n - k)
            bad += not (size * denom <= n**n <= (n + 1) ** 2 * size * denom)
    return bad == 0, f"{bad} violations"


@check("classical_info", "concavity and log-sum inequality")
def _lemmas():
    rng = _rng(9)
    bad = 0
    for _ in range(100):
        w = ci.random_distribution(3, rng)
        xs = [ci.random_distribution(4, rng) for _ in range(3)]
        mix = sum(wi * x for wi, x in zip(w, xs))
        bad += ci.shannon_entropy(mix) < sum(wi * ci.shannon_entropy(x) for wi, x in zip(w, xs)) - 1e-12
        a, b = rng.uniform(0.01, 2, size=5), rng.uniform(0.01, 2, size=5)
        bad += np.sum(a * np.log(a / b)) < a.sum() * np.log(a.sum() / b.sum()) - 1e-12
    return bad == 0, f"{bad} violations"


# -- qstate ------------------------------------------------------------------


@check("qstate", "Schmidt rank and equal marginal entropies")
def _schmidt():
    rng = _rng(10)
    worst, bad = 0.0, 0
    for _ in range(100):
        da, db = (int(d) for d in rng.integers(1, 5, size=2))
        psi = qs.random_state(da * db, rng)
        sd = qs.schmidt(psi, (da, db))
        bad += sd.rank > min(da, db)
        ra, rb = qs.reduced_states(psi, (da, db))
        worst = max(worst, abs(qe.von_neumann(ra) - qe.von_neumann(rb)))
        ph = np.vdot(sd.reassemble(), psi)
        worst = max(worst, np.max(np.abs(sd.reassemble() * ph / abs(ph) - psi)))
    return bad == 0 and worst <= 1e-9, f"{bad} rank violations, max gap {worst:.2e}"


@check("qstate", "purification round trip")
def _purify():
    rng = _rng(11)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 6))
        rho = qs.random_density(d, int(rng.integers(1, d + 1)), rng)
        psi = qs.purify(rho)
        worst = max(worst, np.max(np.abs(mc.partial_trace(qs.ket_to_density(psi), (d, d), 0) - rho)))
    return worst <= 1e-9, f"max error {worst:.2e}"


@check("qstate", "Bures^2 + F^2 = 1")
def _bures():
    rng = _rng(12)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 5))
        a, b = qs.random_density(d, seed=rng), qs.random_density(d, seed=rng)
        worst = max(worst, abs(qs.bures_distance(a, b) ** 2 + qs.fidelity(a, b) ** 2 - 1))
    return worst <= 1e-12, f"max error {worst:.2e}"


# -- qchannel ----------------------------------------------------------------


@check("qchannel", "relative entropy data processing")
def _qdpi():
    rng = _rng(13)
    bad = 0
    for _ in range(200):
        d = int(rng.integers(2, 4))
        s, r = qs.random_density(d, seed=rng), qs.random_density(d, seed=rng)
        ch = qc.random_channel(d, int(rng.integers(1, 4)), rng)
        bad += qe.qrelent(ch.apply(s), ch.apply(r)) > qe.qrelent(s, r) + 1e-9
    return bad == 0, f"{bad} violations"


@check("qchannel", "selective measurement relative-entropy sum")
def _theorem5():
    rng = _rng(14)
    bad = 0
    for _ in range(100):
        d = int(rng.integers(2, 4))
        s, r = qs.random_density(d, seed=rng), qs.random_density(d, seed=rng)
        ch = qc.random_channel(d, int(rng.integers(2, 4)), rng)
        bad += qe.selective_relent_sum(ch, s, r) > qe.qrelent(s, r) + 1e-9
    return bad == 0, f"{bad} violations"


@check("qchannel", "dilation reproduces the channel")
def _dilate():
    rng = _rng(15)
    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(2, 4))
        ch = qc.random_channel(d, int(rng.integers(1, 4)), rng)
        dil = ch.dilate()
        u = dil.unitary
        worst = max(worst, np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
        rho = qs.random_density(d, seed=rng)
        worst = max(worst, np.max(np.abs(dil.apply(rho) - ch.apply(rho))))
    return worst <= 1e-9, f"max error {worst:.2e}"


@check("qchannel", "unitary invariance, partial-trace monotonicity, additivity")
def _f123():
    rng = _rng(16)
    worst, bad = 0.0, 0
    for _ in range(100):
        s, r = qs.random_density(4, seed=rng), qs.random_density(4, seed=rng)
        u = qs.random_unitary(4, rng)
        base = qe.qrelent(s, r)
        worst = max(worst, abs(qe.qrelent(u @ s @ u.conj().T, u @ r @ u.conj().T) - base))
        bad += qe.qrelent(mc.partial_trace(s, (2, 2), 0), mc.partial_trace(r, (2, 2), 0)) > base + 1e-9
        s2, r2 = qs.random_density(2, seed=rng), qs.random_density(2, seed=rng)
        worst = max(worst, abs(qe.qrelent(np.kron(s, s2), np.kron(r, r2)) - base - qe.qrelent(s2, r2)))
    return bad == 0 and worst <= 1e-9, f"{bad} violations, max gap {worst:.2e}"


# -- qentropy ----------------------------------------------------------------


@check("qentropy", "Araki-Lieb and subadditivity")
def _araki_lieb():
    rng = _rng(17)
    bad = 0
    for _ in range(200):
        da, db = (int(d) for d in rng.integers(2, 4, size=2))
        rho = qs.random_density(da * db, int(rng.integers(1, da * db + 1)), rng)
        ra, rb = qs.reduced_states(rho, (da, db))
        sa, sb, sab = qe.von_neumann(ra), qe.von_neumann(rb), qe.von_neumann(rho)
        bad += not (abs(sa - sb) - 1e-9 <= sab <= sa + sb + 1e-9)
    return bad == 0, f"{bad} violations"


@check("qentropy", "additivity and concavity")
def _add_conc():
    rng = _rng(18)
    bad = 0
    for _ in range(100):
        a, b = qs.random_density(2, seed=rng), qs.random_density(3, seed=rng)
        bad += abs(qe.von_neumann(np.kron(a, b)) - qe.von_neumann(a) - qe.von_neumann(b)) > 1e-9
        w = ci.random_distribution(3, rng)
        rs = [qs.random_density(3, seed=rng) for _ in range(3)]
        bad += qe.von_neumann(sum(wi * r for wi, r in zip(w, rs))) < sum(wi * qe.von_neumann(r) for wi, r in zip(w, rs)) - 1e-9
    return bad == 0, f"{bad} violations"


@check("qentropy", "measured Shannon entropy >= von Neumann entropy")
def _measured():
    rng = _rng(19)
    bad = 0
    for _ in range(100):
        rho = qs.random_density(3, seed=rng)
        effects = qc.projective_measurement(qs.random_unitary(3, rng))
        bad += ci.shannon_entropy(qc.povm_probs(effects, rho)) < qe.von_neumann(rho) - 1e-9
    return bad == 0, f"{bad} violations"


@check("qentropy", "Holevo equals symbol-state mutual information")
def _holevo_mi():
    rng = _rng(20)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 5))
        e = qe.Ensemble(ci.random_distribution(n, rng), [qs.random_density(2, seed=rng) for _ in range(n)])
        worst = max(worst, abs(qe.holevo(e) - qe.qmutual(qe.symbol_state(e), (n, 2))))
        worst = max(worst, abs(qe.holevo(e) - qe.holevo_as_relent(e)))
    return worst <= 1e-9, f"max gap {worst:.2e}"


@check("qentropy", "Donald's equality")
def _donald():
    rng = _rng(21)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 5))
        e = qe.Ensemble(ci.random_distribution(n, rng), [qs.random_density(3, seed=rng) for _ in range(n)])
        sigma = qs.random_density(3, seed=rng)
        avg = e.average()
        lhs = qe.qrelent(avg, sigma) + sum(p * qe.qrelent(r, avg) for p, r in e)
        rhs = sum(p * qe.qrelent(r, sigma) for p, r in e)
        worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-9, f"max gap {worst:.2e}"


# -- entanglement --------------------------------------------------------------


@check("entanglement", "separable states have zero REE")
def _e1():
    rng = _rng(22)
    worst = max(ent.ree(ent.random_separable((2, 2), 4, rng).assemble(), (2, 2), restarts=2, seed=rng).value for _ in range(5))
    return worst < 1e-3, f"max value {worst:.2e}"


@check("entanglement", "REE invariant under local unitaries")
def _e2():
    rng = _rng(23)
    worst = 0.0
    for _ in range(3):
        rho = qs.random_density(4, 2, rng)
        u = np.kron(qs.random_unitary(2, rng), qs.random_unitary(2, rng))
        a = ent.ree(rho, (2, 2), restarts=3, seed=1).value
        b = ent.ree(u @ rho @ u.conj().T, (2, 2), restarts=3, seed=1).value
        worst = max(worst, abs(a - b))
    return worst <= 3e-3, f"max gap {worst:.2e}"


@check("entanglement", "REE does not grow under local channels")
def _e3():
    rng = _rng(24)
    worst = -1.0
    for _ in range(3):
        rho = qs.ket_to_density(qs.random_state(4, rng))
        ca, cb = qc.random_channel(2, 2, rng), qc.random_channel(2, 2, rng)
        local = qc.KrausChannel([np.kron(a, b) for a in ca.ops for b in cb.ops])
        out = ent.ree(local.apply(rho), (2, 2), restarts=3, seed=1).value
        worst = max(worst, out - ent.ree(rho, (2, 2), restarts=3, seed=1).value)
    return worst <= 3e-3, f"max increase {worst:.2e}"


@check("entanglement", "REE of pure states equals marginal entropy")
def _e4():
    rng = _rng(25)
    worst = 0.0
    for _ in range(3):
        psi = qs.random_state(4, rng)
        worst = max(worst, abs(ent.ree(psi, (2, 2), restarts=3, seed=1).value - ent.pure_entanglement(psi, (2, 2))))
    return worst <= 2e-3, f"max gap {worst:.2e}"


@check("entanglement", "mixing cannot increase entanglement")
def _ordering():
    rng = _rng(26)
    bad = 0
    for _ in range(3):
        e = qe.Ensemble(ci.random_distribution(2, rng), [qs.random_state(4, rng) for _ in range(2)], (2, 2))
        val = ent.ensemble_entanglement(e).value
        bad += ent.ree(e.average(), (2, 2), restarts=3, seed=1).value > val + 2e-3
    return bad == 0, f"{bad} violations"


@check("entanglement", "memory-flag identity and decomposition inequalities")
def _memory():
    rng = _rng(27)
    worst, bad = 0.0, 0
    for _ in range(10):
        n = int(rng.integers(1, 4))
        e = qe.Ensemble(ci.random_distribution(n, rng), [qs.random_state(4, rng) for _ in range(n)], (2, 2))
        res = ent.ensemble_entanglement(e)
        worst = max(worst, res.identity_gap)
        avg = e.average()
        _, rb = qs.reduced_states(avg, (2, 2))
        # eigen-decomposition of the average is a valid pure decomposition
        w, v = np.linalg.eigh(avg)
        keep = w > 1e-12
        eig = qe.Ensemble(w[keep] / w[keep].sum(), [v[:, i] for i in np.flatnonzero(keep)], (2, 2))
        bad += qe.von_neumann(rb) > ent.ensemble_entanglement(eig).value + qe.von_neumann(avg) + 1e-9
    psi = qs.random_state(4, rng)
    eq = abs(qe.von_neumann(qs.reduced_states(psi, (2, 2))[1]) - ent.pure_entanglement(psi, (2, 2)))
    return worst <= 1e-9 and bad == 0 and eq <= 1e-9, f"identity gap {worst:.2e}, {bad} violations"


# -- protocols -----------------------------------------------------------------


@check("protocols", "teleportation exact on all four branches")
def _teleport():
    rng = _rng(28)
    worst, res = 0.0, 0.0
    for _ in range(50):
        for b in pr.teleport_all_branches(qs.random_state(2, rng)):
            worst = max(worst, 1 - b.fidelity_to_input)
            res = max(res, np.max(np.abs(b.alice_residual - np.eye(2) / 2)))
    return worst <= 1e-12 and res <= 1e-10, f"fidelity loss {worst:.2e}"


@check("protocols", "dense coding: pure = 1 + E, mixed <= CGDC cap")
def _sdc():
    rng = _rng(29)
    worst, bad = 0.0, 0
    for _ in range(50):
        psi = qs.random_state(4, rng)
        worst = max(worst, abs(pr.sdc_capacity(qs.ket_to_density(psi)) - 1 - ent.pure_entanglement(psi, (2, 2))))
        w0 = qs.random_density(4, int(rng.integers(1, 5)), rng)
        bad += pr.sdc_capacity(w0) > ent.cgdc_bound(w0) + 1e-9
    return worst <= 1e-9 and bad == 0, f"max gap {worst:.2e}, {bad} violations"


@check("protocols", "Landauer decomposition")
def _landauer():
    rng = _rng(30)
    worst = 0.0
    for _ in range(100):
        r, w = qs.random_density(3, seed=rng), qs.random_density(3, seed=rng)
        c = pr.landauer_erasure(r, w)
        worst = max(worst, abs(c.delta_s - c.relative_entropy - c.entropy))
    return worst <= 1e-9, f"max gap {worst:.2e}"


@check("protocols", "compression rate approaches S from above")
def _compress():
    reps = [pr.schumacher_compress(math.pi / 6, n, trials=20) for n in (4, 8, 12, 16)]
    rates = [r.rate_bits_per_symbol for r in reps]
    ok = all(a >= b for a, b in zip(rates, rates[1:])) and rates[-1] >= reps[0].entropy_bits
    ok &= all(r.success_prob_exact >= 0.98 for r in reps)
    return ok, "rates " + ", ".join(f"{x:.3f}" for x in rates)


# -- qalgo ---------------------------------------------------------------------


@check("qalgo", "Deutsch verdicts")
def _deutsch():
    ok = all(
        qa.deutsch(f).verdict == ("constant" if f[0] == f[1] else "varying") for f in ("00", "01", "10", "11")
    )
    return ok, "four functions"


@check("qalgo", "Grover mutual information: definitions agree, caps hold")
def _grover():
    tr = qa.grover_trace(3, 1.0, 8)
    worst = 0.0
    for k in (0, 1, 2, 5):
        mc_state = qa.memory_computer_state(qa.grover_branch_states(3, 1.0, k))
        worst = max(worst, abs(qe.qmutual(mc_state, (8, 8)) - tr.mutual_info[k]))
    drift = float(np.max(np.abs(tr.branch_entropies - tr.branch_entropies[0])))
    cap = bool(np.all(tr.mutual_info <= 3 + 1e-9))
    return worst <= 1e-9 and drift <= 1e-10 and cap, f"gap {worst:.2e}, drift {drift:.2e}"


@check("qalgo", "Grover near-recurrence after six blocks")
def _recurrence():
    tr = qa.grover_trace(4, 1.0, 12)
    d = max(qs.trace_distance(tr.marked_states[k], tr.marked_states[k + 6]) for k in range(7))
    return d < 0.2, f"max trace distance {d:.3f}"


def run(verbose: bool = True, out=None) -> bool:
    """Run every check, print a table and return whether all passed."""
    import sys

    out = out or sys.stdout
    all_ok = True
    for module, name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # report, do not abort the table
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= bool(ok)
        if verbose:
            print(
                f"{'PASS' if ok else 'FAIL'}  {module:<15} {name:<58} {detail} ({time.perf_counter() - t0:.2f}s)",
                file=out,
            )
    if verbose:
        print(f"{'all checks passed' if all_ok else 'some checks FAILED'} ({len(CHECKS)} checks)", file=out)
    return all_ok
