"""Seeded instance factories and the acceptance suite runners.

Each family constructs generators that satisfy its hypothesis *by
construction*: matrices are assembled in a common triangular (or block
diagonal) frame and then conjugated by one shared unimodular matrix.
Sharing the conjugator is the decisive correctness choice: simultaneous
triangularizability is a property of the family, and independent
conjugators would almost surely destroy it.

The suite runners at the bottom drive the acceptance matrix; the CLI
``selftest`` subcommand and the test suite both call them.  Reports
contain no wall-clock data so reruns with the same seed are
byte-identical.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import invariant, semigroup, spectrum, unitarize
from .triangularize import (check_kaplansky_hypothesis, diagonal_of,
                            levitzki_triangularize)
from .triangularize import triangularize as run_triangularize
from .linalg import Matrix, Subspace, is_nilpotent, kernel_of_rows, verify_flag
from .scalar import GF, Field, Q

FAMILIES = ("levitzki", "kolchin", "kaplansky", "block_scalar",
            "diagonalizable", "unitary_block", "triangular_commutant")

COMPLEX = "C"


class BadSpec(ValueError):
    """The instance specification cannot be realized."""


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int
    field: object  # a scalar.Field, or COMPLEX for numeric families
    generator_count: int
    seed: int

    def label(self) -> str:
        fk = COMPLEX if self.field == COMPLEX else repr(self.field)
        return f"{self.family}/{fk}/n{self.n}/g{self.generator_count}/s{self.seed}"


def _rng_for(spec: InstanceSpec) -> random.Random:
    digest = hashlib.sha256(spec.label().encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# ---------------------------------------------------------------------------
# building blocks


def _nonzero_scalar(f: Field, rng: random.Random):
    if f.p is not None:
        return rng.randrange(1, f.p)
    num = rng.choice([k for k in range(-9, 10) if k])
    return Fraction(num, rng.randint(1, 9))


def _small_scalar(f: Field, rng: random.Random):
    if f.p is not None:
        return rng.randrange(f.p)
    if rng.random() < 0.35:
        return Fraction(rng.randint(-9, 9), rng.randint(2, 9))
    return Fraction(rng.randint(-9, 9))


def _strict_upper(f: Field, n: int, rng: random.Random,
                  ensure_nonzero: bool = True) -> Matrix:
    while True:
        rows = [[f.zero] * n for _ in range(n)]
        nonzero = False
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.7:
                    v = _small_scalar(f, rng)
                    rows[i][j] = v
                    nonzero = nonzero or v != f.zero
        if nonzero or not ensure_nonzero:
            return Matrix.from_rows(f, rows)


def _unimodular(f: Field, n: int, rng: random.Random) -> Matrix:
    """Product of shear operations; determinant 1, small entries."""
    rows = [[f.one if i == j else f.zero for j in range(n)] for i in range(n)]
    for _ in range(n + 2):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        if f.p is not None:
            lam = rng.randrange(1, f.p)
        else:
            lam = Fraction(rng.choice([-2, -1, 1, 2]))
        rows[j] = [f.add(x, f.mul(lam, y)) for x, y in zip(rows[j], rows[i])]
    return Matrix.from_rows(f, rows)


def random_matrix(f: Field, n: int, rng: random.Random) -> Matrix:
    return Matrix.from_rows(f, [[_small_scalar(f, rng) for _ in range(n)]
                                for _ in range(n)])


def _composition(n: int, parts: int, rng: random.Random) -> list:
    cuts = sorted(rng.sample(range(1, n), parts - 1))
    sizes = []
    prev = 0
    for c in cuts + [n]:
        sizes.append(c - prev)
        prev = c
    return sizes


def _block_scalar_matrix(f: Field, sizes, scalars) -> Matrix:
    n = sum(sizes)
    rows = [[f.zero] * n for _ in range(n)]
    off = 0
    for s, c in zip(sizes, scalars):
        for i in range(s):
            rows[off + i][off + i] = c
        off += s
    return Matrix.from_rows(f, rows)


def _block_strict_upper(f: Field, sizes, rng: random.Random) -> Matrix:
    n = sum(sizes)
    rows = [[f.zero] * n for _ in range(n)]
    off = 0
    for s in sizes:
        for i in range(s):
            for j in range(i + 1, s):
                if rng.random() < 0.7:
                    rows[off + i][off + j] = _small_scalar(f, rng)
        off += s
    return Matrix.from_rows(f, rows)


# ---------------------------------------------------------------------------
# exact families


def generate_detailed(spec: InstanceSpec) -> dict:
    """Generators plus the internal frame data (for hypothesis checks)."""
    if spec.family not in FAMILIES:
        raise BadSpec(f"unknown family {spec.family!r}")
    if spec.family == "unitary_block":
        return _generate_numeric(spec)
    if spec.field == COMPLEX:
        raise BadSpec("complex field is only valid for the numeric family")
    if spec.n < 2:
        raise BadSpec("need dimension at least 2")
    if spec.generator_count < 1:
        raise BadSpec("need at least one generator")
    f: Field = spec.field
    rng = _rng_for(spec)
    n = spec.n
    P = _unimodular(f, n, rng)
    Pinv = P.inv()
    frame = []
    info = {"conjugator": P}

    if spec.family == "levitzki":
        frame = [_strict_upper(f, n, rng) for _ in range(spec.generator_count)]
    elif spec.family == "kolchin":
        ident = Matrix.identity(f, n)
        frame = [ident + _strict_upper(f, n, rng)
                 for _ in range(spec.generator_count)]
    elif spec.family == "kaplansky":
        scalars = [_nonzero_scalar(f, rng) for _ in range(spec.generator_count)]
        frame = [Matrix.scalar(f, n, c) + _strict_upper(f, n, rng)
                 for c in scalars]
        info["scalars"] = scalars
    elif spec.family in ("block_scalar", "diagonalizable"):
        nonzero_count = (f.p - 1) if f.p is not None else n
        max_parts = min(n, nonzero_count, 4)
        if max_parts < 2:
            raise BadSpec(f"{f} has too few nonzero scalars for two blocks")
        parts = rng.randint(2, max_parts)
        sizes = _composition(n, parts, rng)
        info["partition"] = sizes
        scalar_sets = []
        for _ in range(spec.generator_count):
            if f.p is not None:
                scalars = rng.sample(range(1, f.p), parts)
            else:
                scalars = [Fraction(v) for v in
                           rng.sample([k for k in range(-6, 7) if k], parts)]
            scalar_sets.append(scalars)
        info["scalars"] = scalar_sets
        diag_parts = [_block_scalar_matrix(f, sizes, sc) for sc in scalar_sets]
        nil_parts = [_block_strict_upper(f, sizes, rng)
                     for _ in range(spec.generator_count)]
        info["commuting_parts"] = diag_parts
        info["nilpotent_parts"] = nil_parts
        frame = [a + m for a, m in zip(diag_parts, nil_parts)]
    elif spec.family == "triangular_commutant":
        uppers = []
        for _ in range(spec.generator_count):
            rows = [[f.zero] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = _nonzero_scalar(f, rng)
                for j in range(i + 1, n):
                    rows[i][j] = _small_scalar(f, rng)
            uppers.append(Matrix.from_rows(f, rows))
        nils = _commutant_strict_uppers(f, n, uppers, rng,
                                        spec.generator_count)
        info["triangular_parts"] = uppers
        info["nilpotent_parts"] = nils
        frame = [t + m for t, m in zip(uppers, nils)]
    else:
        raise BadSpec(f"family {spec.family!r} not handled")

    gens = [Pinv * g * P for g in frame]
    info["frame_generators"] = frame
    info["generators"] = gens
    return info


def _commutant_strict_uppers(f, n, uppers, rng, count):
    """Strictly upper matrices commuting with every given matrix."""
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rows = []
    for T in uppers:
        tr = T.scalar_rows()
        for a in range(n):
            for b in range(n):
                # coefficient of N[pos] in (T N - N T)[a][b]
                row = []
                for (i, j) in positions:
                    c = f.zero
                    if j == b:
                        c = f.add(c, tr[a][i])
                    if i == a:
                        c = f.sub(c, tr[j][b])
                    row.append(c)
                rows.append(row)
    sol = kernel_of_rows(f, rows, len(positions))
    out = []
    for _ in range(count):
        if sol.dim == 0:
            out.append(Matrix.zeros(f, n))
            continue
        coef = [f.from_int(rng.randint(-3, 3)) if f.p is None
                else rng.randrange(f.p) for _ in range(sol.dim)]
        vec = [f.zero] * len(positions)
        for c, basis in zip(coef, sol.rows):
            vec = [f.add(x, f.mul(c, y)) for x, y in zip(vec, basis)]
        m = [[f.zero] * n for _ in range(n)]
        for (i, j), v in zip(positions, vec):
            m[i][j] = v
        out.append(Matrix.from_rows(f, m))
    return out


def generate(spec: InstanceSpec) -> list:
    """Generator list for the instance (exact Matrix or complex ndarray)."""
    return generate_detailed(spec)["generators"]


# ---------------------------------------------------------------------------
# numeric family


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _generate_numeric(spec: InstanceSpec) -> dict:
    if spec.field != COMPLEX:
        raise BadSpec("numeric family requires the complex field")
    if spec.n < 2:
        raise BadSpec("need dimension at least 2")
    rng = _rng_for(spec)
    n = spec.n
    scalar_kind = spec.seed % 5 == 0
    info: dict = {"kind": "scalar" if scalar_kind else "group"}

    if scalar_kind:
        order = rng.choice([2, 3, 4, 6])
        gens = []
        for _ in range(spec.generator_count):
            r = rng.uniform(0.5, 2.0)
            phase = np.exp(2j * np.pi * rng.randrange(order) / order)
            gens.append(r * phase * np.eye(n, dtype=complex))
        info["generators"] = gens
        info["group_order"] = order
        return info

    # block-diagonal finite unitary family: per-block powers of one base
    # element, so the normalized closure is cyclic (or dihedral) of order
    # at most 48
    order = rng.choice([3, 4, 6, 8, 12])
    sizes = []
    left = n
    while left > 0:
        s = 2 if left >= 2 and rng.random() < 0.7 else 1
        sizes.append(s)
        left -= s
    base_blocks = []
    for s in sizes:
        k = rng.randrange(1, order)
        if s == 2:
            base_blocks.append(_rotation(2 * np.pi * k / order))
        else:
            base_blocks.append(np.array([[np.exp(2j * np.pi * k / order)]]))
    X = np.zeros((n, n), dtype=complex)
    off = 0
    for B in base_blocks:
        d = B.shape[0]
        X[off:off + d, off:off + d] = B
        off += d
    dihedral = all(s == 2 for s in sizes) and rng.random() < 0.5
    Y = None
    if dihedral:
        Y = np.zeros((n, n), dtype=complex)
        off = 0
        for s in sizes:
            Y[off:off + 2, off:off + 2] = np.array([[1, 0], [0, -1]],
                                                   dtype=complex)
            off += 2
    # conjugator with controlled condition number
    rs = np.random.default_rng(int.from_bytes(
        hashlib.sha256((spec.label() + "|conj").encode()).digest()[:8], "big"))
    W1, _ = np.linalg.qr(rs.normal(size=(n, n)) + 1j * rs.normal(size=(n, n)))
    W2, _ = np.linalg.qr(rs.normal(size=(n, n)) + 1j * rs.normal(size=(n, n)))
    svals = np.array([rs.uniform(1.0, 10.0) for _ in range(n)])
    Qc = W1 @ np.diag(svals) @ W2.conj().T
    Qinv = np.linalg.inv(Qc)
    gens = []
    for i in range(spec.generator_count):
        r = rng.uniform(0.5, 2.0)
        if dihedral and i % 2 == 1:
            U = X @ Y
        else:
            U = np.linalg.matrix_power(X, rng.randrange(1, order))
        gens.append(r * (Qc @ U @ Qinv))
    info.update({"generators": gens, "group_order": order,
                 "block_sizes": sizes, "conjugator": Qc,
                 "dihedral": dihedral})
    return info


# ---------------------------------------------------------------------------
# oracle comparison


def oracle_compare(gens, verdict: invariant.ReducibilityVerdict) -> dict:
    """Cross-check a reducibility verdict against exhaustive enumeration."""
    f, n = gens[0].field, gens[0].n
    report = {"applicable": False, "agrees": None, "oracle_count": None,
              "verdict": verdict.status}
    if f.p is None:
        return report
    try:
        subs = invariant.brute_force_invariant_subspaces(gens)
    except invariant.BudgetExceeded:
        return report
    report["applicable"] = True
    report["oracle_count"] = len(subs)
    if verdict.status == invariant.REDUCIBLE:
        report["agrees"] = bool(subs) and verdict.subspace in subs
    elif verdict.status == invariant.IRREDUCIBLE:
        report["agrees"] = not subs
    else:
        report["agrees"] = False
    return report


# ---------------------------------------------------------------------------
# acceptance suite definitions


def _cycled(items, count, base_seed, family, gowith=None):
    specs = []
    for i in range(count):
        f, n = items[i % len(items)]
        gc = 2 + (i % 2)
        fam = family if gowith is None else gowith[i % len(gowith)]
        specs.append(InstanceSpec(fam, n, f, gc, base_seed + i))
    return specs


def singleton_suite_specs(limit=None) -> list:
    combos = ([(Q, n) for n in range(2, 7)]
              + [(GF(2), 2), (GF(2), 4), (GF(3), 3), (GF(3), 6)]
              + [(GF(5), n) for n in range(2, 6)])
    specs = _cycled(combos, 200, 1000, "kaplansky")
    return specs[:limit] if limit else specs


def unipotent_suite_specs(limit=None) -> list:
    combos = ([(Q, n) for n in range(2, 7)]
              + [(GF(2), n) for n in (2, 3, 4)]
              + [(GF(3), n) for n in (2, 3, 4)]
              + [(GF(5), n) for n in (2, 3)])
    specs = _cycled(combos, 100, 2000, "kolchin")
    return specs[:limit] if limit else specs


def nilpotent_suite_specs(limit=None) -> list:
    combos = ([(Q, n) for n in range(2, 7)]
              + [(GF(2), n) for n in (2, 3, 4)]
              + [(GF(3), n) for n in (2, 3, 4)]
              + [(GF(5), n) for n in (2, 3)])
    specs = _cycled(combos, 100, 3000, "levitzki")
    return specs[:limit] if limit else specs


def block_scalar_suite_specs(limit=None) -> list:
    combos = ([(Q, n) for n in (3, 4, 5, 6)]
              + [(GF(5), n) for n in (3, 4)] + [(GF(3), 3)])
    specs = _cycled(combos, 100, 4000, "block_scalar",
                    gowith=("block_scalar", "diagonalizable"))
    return specs[:limit] if limit else specs


def unitary_block_suite_specs(limit=None) -> list:
    combos = [(COMPLEX, n) for n in (2, 3, 4)]
    specs = _cycled(combos, 50, 9000, "unitary_block")
    return specs[:limit] if limit else specs


def _diag_constant(diag) -> bool:
    return all(x == diag[0] for x in diag)


def run_singleton_suite(limit=None) -> dict:
    specs = singleton_suite_specs(limit)
    flags = const = 0
    failures = []
    for spec in specs:
        gens = generate(spec)
        res = run_triangularize(gens)
        if res.ok and verify_flag(gens, res.flag):
            flags += 1
            diags = diagonal_of(gens, res.flag)
            if all(_diag_constant(d) for d in diags):
                const += 1
            else:
                failures.append(spec.label() + ":diagonal")
        else:
            failures.append(spec.label() + ":no-flag")
    return {"suite": "singleton", "instances": len(specs), "flags": flags,
            "constant_diagonals": const, "failures": failures,
            "ok": flags == len(specs) and const == len(specs)}


def run_unipotent_suite(limit=None) -> dict:
    specs = unipotent_suite_specs(limit)
    flags = ones = 0
    failures = []
    for spec in specs:
        gens = generate(spec)
        res = run_triangularize(gens)
        if res.ok:
            flags += 1
            diags = diagonal_of(gens, res.flag)
            f = gens[0].field
            if all(x == f.one for d in diags for x in d):
                ones += 1
            else:
                failures.append(spec.label() + ":diagonal")
        else:
            failures.append(spec.label() + ":no-flag")
    return {"suite": "unipotent", "instances": len(specs), "flags": flags,
            "all_ones_diagonals": ones, "failures": failures,
            "ok": flags == len(specs) and ones == len(specs)}


def run_nilpotent_suite(limit=None) -> dict:
    specs = nilpotent_suite_specs(limit)
    both = zeros = 0
    failures = []
    for spec in specs:
        gens = generate(spec)
        res = run_triangularize(gens)
        fast = levitzki_triangularize(gens)
        if res.ok and verify_flag(gens, fast) and verify_flag(gens, res.flag):
            both += 1
            f = gens[0].field
            diags = (diagonal_of(gens, res.flag)
                     + diagonal_of(gens, fast))
            if all(x == f.zero for d in diags for x in d):
                zeros += 1
            else:
                failures.append(spec.label() + ":diagonal")
        else:
            failures.append(spec.label() + ":no-flag")
    return {"suite": "nilpotent", "instances": len(specs), "flags": both,
            "zero_diagonals": zeros, "failures": failures,
            "ok": both == len(specs) and zeros == len(specs)}


def run_block_scalar_suite(limit=None) -> dict:
    specs = block_scalar_suite_specs(limit)
    flags = split_seen = 0
    failures = []
    for spec in specs:
        gens = generate(spec)
        res = run_triangularize(gens)
        if res.ok:
            flags += 1
            if any(info.stage == "spectral_split" for info in res.diagnostics):
                split_seen += 1
            else:
                failures.append(spec.label() + ":no-split-level")
        else:
            failures.append(spec.label() + ":no-flag")
    return {"suite": "block_scalar", "instances": len(specs), "flags": flags,
            "spectral_split_levels": split_seen, "failures": failures,
            "ok": flags == len(specs) and split_seen == len(specs)}


def run_oracle_agreement_suite(limit=None) -> dict:
    count = limit or 500
    combos = [(GF(2), 2), (GF(2), 3), (GF(3), 2), (GF(3), 3)]
    disagreements = []
    for i in range(count):
        f, n = combos[i % len(combos)]
        digest = hashlib.sha256(f"oracle|{i}".encode()).digest()
        rng = random.Random(int.from_bytes(digest[:8], "big"))
        gens = [random_matrix(f, n, rng), random_matrix(f, n, rng)]
        verdict = invariant.find_invariant_subspace(gens)
        rep = oracle_compare(gens, verdict)
        if not rep["applicable"] or not rep["agrees"]:
            disagreements.append(i)
    return {"suite": "oracle_agreement", "instances": count,
            "disagreements": len(disagreements),
            "failures": disagreements[:10], "ok": not disagreements}


def run_ideal_property_suite(limit=None) -> dict:
    specs = (singleton_suite_specs(limit) + unipotent_suite_specs(limit)
             + nilpotent_suite_specs(limit) + block_scalar_suite_specs(limit))
    complete = truncated = violations = 0
    failures = []
    for spec in specs:
        gens = generate(spec)
        C = semigroup.closure(gens, cap=10_000)
        if C.truncated:
            truncated += 1
            continue
        complete += 1
        ideal = semigroup.nilpotent_ideal(C)
        ideal_keys = {J._key() for J in ideal}
        elem_keys = {M._key() for M in C.elements}
        for J in ideal:
            for S in C.elements:
                for P in (S * J, J * S):
                    if P.is_zero():
                        continue
                    if P._key() not in ideal_keys or P._key() not in elem_keys:
                        violations += 1
                        failures.append(spec.label())
    return {"suite": "ideal_property", "instances": len(specs),
            "complete_closures": complete, "truncated_closures": truncated,
            "violations": violations, "failures": failures[:10],
            "ok": violations == 0}


def run_unipotent_product_suite(limit=None) -> dict:
    # over a characteristic-zero field, a complete closure whose elements
    # all have singleton spectra and which contains no nonzero nilpotent
    # consists of scalar matrices with c^m = 1, i.e. subsets of {I, -I};
    # the suite still exercises every filter on the engine side
    count = limit or 50
    checked = violations = 0
    failures = []
    for i in range(count):
        digest = hashlib.sha256(f"unipotent-product|{i}".encode()).digest()
        rng = random.Random(int.from_bytes(digest[:8], "big"))
        n = 2 + i % 5
        gens = [Matrix.scalar(Q, n, Fraction(rng.choice([1, -1])))
                for _ in range(1 + rng.randrange(2))]
        C = semigroup.closure(gens, cap=64)
        if C.truncated:
            failures.append(f"{i}:truncated")
            continue
        if any(is_nilpotent(M) and not M.is_zero() for M in C.elements):
            failures.append(f"{i}:nilpotent")
            continue
        if not all(spectrum.singleton_spectrum(M).singleton
                   for M in C.elements):
            failures.append(f"{i}:non-singleton")
            continue
        checked += 1
        unis = [M for M in C.elements if spectrum.is_unipotent(M)]
        for A in unis:
            for B in unis:
                if not spectrum.is_unipotent(A * B):
                    violations += 1
                    failures.append(f"{i}:product")
    return {"suite": "unipotent_product", "instances": count,
            "hypothesis_closures": checked, "violations": violations,
            "failures": failures[:10],
            "ok": checked == count and violations == 0}


def run_power_ratio_suite(limit=None) -> dict:
    """Floating shadow of the binomial ratio (I+N)^m / C(m, k) -> N^k."""
    from math import comb
    count = limit or 10
    ok_count = 0
    rows = []
    for i in range(count):
        digest = hashlib.sha256(f"power-ratio|{i}".encode()).digest()
        rng = random.Random(int.from_bytes(digest[:8], "big"))
        n = 2 + i % 3
        while True:
            rows_m = [[Fraction(0)] * n for _ in range(n)]
            nz = False
            for a in range(n):
                for b in range(a + 1, n):
                    v = rng.choice([-2, -1, 0, 1, 2])
                    rows_m[a][b] = Fraction(v)
                    nz = nz or v != 0
            if nz:
                break
        N = Matrix.from_rows(Q, rows_m)
        k = 0
        P = Matrix.identity(Q, n)
        while not (P * N).is_zero():
            P = P * N
            k += 1
        Nf = np.array([[float(N.entry(a, b)) for b in range(n)]
                       for a in range(n)])
        Npow = np.linalg.matrix_power(Nf, k)
        base = np.eye(n) + Nf
        res = {}
        for m in (10 ** 2, 10 ** 3, 10 ** 4):
            F = np.linalg.matrix_power(base, m) / comb(m, k)
            res[m] = float(np.max(np.abs(F - Npow)))
        good = (res[10 ** 4] <= 1e-2 and res[10 ** 4] < res[10 ** 2]
                and res[10 ** 3] < res[10 ** 2])
        ok_count += good
        rows.append({"n": n, "k": k, "residuals": [res[10 ** 2],
                                                   res[10 ** 3],
                                                   res[10 ** 4]],
                     "ok": good})
    return {"suite": "power_ratio", "instances": count, "passing": ok_count,
            "rows": rows, "ok": ok_count == count}


def run_unitary_block_suite(limit=None) -> dict:
    specs = unitary_block_suite_specs(limit)
    succeeded = scalar_ok = 0
    failures = []
    for spec in specs:
        info = generate_detailed(spec)
        gens = info["generators"]
        try:
            res = unitarize.block_unitarize(gens, cap=200, tol=1e-8)
        except Exception as exc:  # noqa: BLE001 - report and count
            failures.append(spec.label() + f":{type(exc).__name__}")
            continue
        bad = [r for kind, r in zip(res.kinds, res.residuals)
               if kind == "ScaledUnitary" and r > 1e-8]
        if bad:
            failures.append(spec.label() + ":residual")
            continue
        if info["kind"] == "scalar":
            if all(d == 1 for d in res.block_dims):
                scalar_ok += 1
            else:
                failures.append(spec.label() + ":scalar-blocks")
                continue
        succeeded += 1
    scalars = sum(1 for s in specs
                  if generate_detailed(s)["kind"] == "scalar")
    return {"suite": "unitary_block", "instances": len(specs),
            "succeeded": succeeded, "scalar_instances": scalars,
            "scalar_all_1x1": scalar_ok, "failures": failures,
            "ok": succeeded == len(specs) and scalar_ok == scalars}


def run_determinism_suite(limit=None) -> dict:
    """Same document, same seed, twice through the CLI: identical bytes."""
    from . import cli
    samples = _determinism_documents(limit or 5)
    identical = 0
    failures = []
    for name, argv, doc in samples:
        out1 = cli.run_to_string(argv, doc)
        out2 = cli.run_to_string(argv, doc)
        if out1 == out2:
            identical += 1
        else:
            failures.append(name)
    rerun1 = run_unipotent_suite(limit=3)
    rerun2 = run_unipotent_suite(limit=3)
    suites_match = rerun1 == rerun2
    return {"suite": "determinism", "samples": len(samples),
            "identical": identical, "suite_rerun_identical": suites_match,
            "failures": failures,
            "ok": identical == len(samples) and suites_match}


def _matrix_doc(field_desc, gens, options=None) -> dict:
    doc = {"field": field_desc,
           "generators": [g.to_strings() for g in gens]}
    if options:
        doc["options"] = options
    return doc


def _determinism_documents(count):
    samples = []
    spec = InstanceSpec("kaplansky", 3, Q, 2, 77)
    gens = generate(spec)
    samples.append(("triangularize-q",
                    ["triangularize", "--diagonals"],
                    _matrix_doc({"kind": "Q"}, gens)))
    rot = Matrix.from_rows(Q, [[0, -1], [1, 0]])
    samples.append(("closure-rotation", ["closure", "--emit-elements"],
                    _matrix_doc({"kind": "Q"}, [rot])))
    samples.append(("check-witness", ["check"],
                    _matrix_doc({"kind": "Q"},
                                [Matrix.from_rows(Q, [[1, 0], [0, 2]])])))
    gf = GF(5)
    samples.append(("reducibility-gf5", ["check", "--reducibility"],
                    _matrix_doc({"kind": "GFp", "p": 5},
                                [random_matrix(gf, 3, random.Random(4)),
                                 random_matrix(gf, 3, random.Random(5))])))
    nspec = InstanceSpec("unitary_block", 2, COMPLEX, 2, 9001)
    ngens = generate(nspec)
    ndoc = {"field": {"kind": "C"},
            "generators": [[[[float(z.real), float(z.imag)] for z in row]
                            for row in g] for g in ngens]}
    samples.append(("unitarize", ["unitarize"], ndoc))
    return samples[:count]


SUITES = {
    "singleton": run_singleton_suite,
    "unipotent": run_unipotent_suite,
    "nilpotent": run_nilpotent_suite,
    "block_scalar": run_block_scalar_suite,
    "oracle_agreement": run_oracle_agreement_suite,
    "ideal_property": run_ideal_property_suite,
    "unipotent_product": run_unipotent_product_suite,
    "power_ratio": run_power_ratio_suite,
    "unitary_block": run_unitary_block_suite,
    "determinism": run_determinism_suite,
}


def run_selftest(limit=None, suites=None) -> dict:
    """Run the acceptance matrix; returns a machine-readable table."""
    wanted = suites or list(SUITES)
    results = {}
    for name in wanted:
        results[name] = SUITES[name](limit)
    return {"suites": results,
            "all_pass": all(r["ok"] for r in results.values())}
