"""Real Jordan canonical form of 2x2 and 3x3 real matrices.

``classify`` returns the canonical matrix ``J`` together with ``P`` and
``P_inv`` such that ``A = P_inv @ J @ P``; in the notation of an
equivalence transformation ``v = P r`` the canonical system is ``v' = J v``.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditionedTransform, NotAnEigenvalue, SingularMatrix
from .linalg import as_matrix, eigenvalues, inverse, scale_of

CLUSTER_TOL = 1e-8
RANK_TOL = 1e-8
COND_LIMIT = 1e12


class CaseTag(str, enum.Enum):
    D2_DIAG = "D2-Diag"
    D2_COMPLEX = "D2-ComplexPair"
    D2_BLOCK = "D2-JordanBlock"
    D3_DIAG = "D3-Diag"
    D3_COMPLEX = "D3-ComplexPairPlusReal"
    D3_BLOCK2 = "D3-Block2PlusReal"
    D3_BLOCK3 = "D3-Block3"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RealJordanForm:
    """Canonical form with the transform recovering the source matrix.

    ``params`` keys by case:

    ========================  =====================
    D2-Diag / D3-Diag         l1 >= l2 (>= l3)
    D2-ComplexPair            a, b (b > 0)
    D2-JordanBlock            lam
    D3-ComplexPairPlusReal    a, b, l3
    D3-Block2PlusReal         l1 (2x2 block), l2
    D3-Block3                 lam
    ========================  =====================
    """

    case: CaseTag
    params: dict
    J: np.ndarray
    P: np.ndarray
    P_inv: np.ndarray
    ill_conditioned: bool = False
    scale: float = field(default=1.0, compare=False)

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    def blocks(self) -> list[tuple[complex, int]]:
        """(eigenvalue, block size) for every elementary Jordan block."""
        p = self.params
        c = self.case
        if c in (CaseTag.D2_DIAG, CaseTag.D3_DIAG):
            return [(complex(v), 1) for v in self.eigenvalues()]
        if c is CaseTag.D2_COMPLEX:
            return [(complex(p["a"], p["b"]), 1), (complex(p["a"], -p["b"]), 1)]
        if c is CaseTag.D3_COMPLEX:
            return [(complex(p["a"], p["b"]), 1), (complex(p["a"], -p["b"]), 1), (complex(p["l3"]), 1)]
        if c is CaseTag.D2_BLOCK:
            return [(complex(p["lam"]), 2)]
        if c is CaseTag.D3_BLOCK2:
            return [(complex(p["l1"]), 2), (complex(p["l2"]), 1)]
        return [(complex(p["lam"]), 3)]

    def eigenvalues(self) -> list[complex]:
        p = self.params
        c = self.case
        if c is CaseTag.D2_DIAG:
            return [complex(p["l1"]), complex(p["l2"])]
        if c is CaseTag.D3_DIAG:
            return [complex(p["l1"]), complex(p["l2"]), complex(p["l3"])]
        out = []
        for ev, size in self.blocks():
            out += [ev] * size
        return out


def canonical_matrix(case: CaseTag, params: dict) -> np.ndarray:
    p = params
    if case is CaseTag.D2_DIAG:
        return np.diag([p["l1"], p["l2"]]).astype(float)
    if case is CaseTag.D2_COMPLEX:
        return np.array([[p["a"], p["b"]], [-p["b"], p["a"]]], dtype=float)
    if case is CaseTag.D2_BLOCK:
        return np.array([[p["lam"], 1.0], [0.0, p["lam"]]])
    if case is CaseTag.D3_DIAG:
        return np.diag([p["l1"], p["l2"], p["l3"]]).astype(float)
    if case is CaseTag.D3_COMPLEX:
        return np.array([[p["a"], p["b"], 0.0], [-p["b"], p["a"], 0.0], [0.0, 0.0, p["l3"]]], dtype=float)
    if case is CaseTag.D3_BLOCK2:
        return np.array([[p["l1"], 1.0, 0.0], [0.0, p["l1"], 0.0], [0.0, 0.0, p["l2"]]], dtype=float)
    if case is CaseTag.D3_BLOCK3:
        lam = p["lam"]
        return np.array([[lam, 1.0, 0.0], [0.0, lam, 1.0], [0.0, 0.0, lam]], dtype=float)
    raise ValueError(case)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def _null_space(m: np.ndarray, k: int) -> np.ndarray:
    """Orthonormal basis (columns) of the k smallest right singular directions."""
    _, _, vh = np.linalg.svd(m)
    return vh[-k:].conj().T


def _rank(m: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol))


def _eigvec(a: np.ndarray, lam: float) -> np.ndarray:
    n = a.shape[0]
    return _fix_sign(_null_space(a - lam * np.eye(n), 1)[:, 0].real)


def _complex_basis(a: np.ndarray, z: complex) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    w = _null_space(a.astype(complex) - z * np.eye(n), 1)[:, 0]
    mag = np.abs(w)
    w = w / w[int(np.flatnonzero(mag >= mag.max() * (1.0 - 1e-9))[0])]
    return w.real.copy(), w.imag.copy()


def _aligned_basis(basis: np.ndarray) -> list[np.ndarray]:
    """Orthonormal basis of span(basis) built from projected coordinate axes,
    so a subspace spanned by axes is returned as those axes."""
    proj = basis @ basis.T
    order = np.argsort(-np.diag(proj), kind="stable")
    out: list[np.ndarray] = []
    for i in order:
        v = proj[:, i].copy()
        for u in out:
            v -= np.dot(u, v) * u
        if np.linalg.norm(v) > 1e-6:
            out.append(_fix_sign(v))
        if len(out) == basis.shape[1]:
            break
    return out


def _chain_of_two(n_mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(s1, s2) with N s2 = s1 and N s1 = 0, s2 the minimum-norm preimage."""
    cols = n_mat.T
    u = cols[int(np.argmax(np.linalg.norm(cols, axis=1)))]
    u = _fix_sign(u)
    s2 = np.linalg.pinv(n_mat) @ u
    s1 = n_mat @ s2
    return s1, s2


def _cluster_reals(vals: list[float], tol: float) -> list[list[float]]:
    groups: list[list[float]] = []
    for v in sorted(vals, reverse=True):
        if groups and abs(groups[-1][-1] - v) <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


def classify(a) -> RealJordanForm:
    """Real Jordan canonical form of a 2x2 or 3x3 real matrix."""
    a = as_matrix(a)
    n = a.shape[0]
    sc = scale_of(a)
    eig = eigenvalues(a)
    reals = [z.real for z in eig if z.imag == 0.0]
    pair = next((z for z in eig if z.imag > 0.0), None)
    eye = np.eye(n)

    if pair is not None:
        re_w, im_w = _complex_basis(a, pair)
        params = {"a": pair.real, "b": pair.imag}
        if n == 2:
            case, cols = CaseTag.D2_COMPLEX, [re_w, im_w]
        else:
            params["l3"] = reals[0]
            case, cols = CaseTag.D3_COMPLEX, [re_w, im_w, _eigvec(a, reals[0])]
        return _finish(a, case, params, cols, sc)

    groups = _cluster_reals(reals, CLUSTER_TOL * sc)
    means = [float(np.mean(g)) for g in groups]
    sizes = [len(g) for g in groups]

    if n == 2:
        if len(groups) == 2:
            l1, l2 = means
            cols = [_eigvec(a, l1), _eigvec(a, l2)]
            return _finish(a, CaseTag.D2_DIAG, {"l1": l1, "l2": l2}, cols, sc)
        lam = means[0]
        nm = a - lam * eye
        if _rank(nm, RANK_TOL * sc) == 0:
            return _finish(a, CaseTag.D2_DIAG, {"l1": lam, "l2": lam}, [eye[0], eye[1]], sc)
        s1, s2 = _chain_of_two(nm)
        return _finish(a, CaseTag.D2_BLOCK, {"lam": lam}, [s1, s2], sc)

    if len(groups) == 3:
        l1, l2, l3 = means
        cols = [_eigvec(a, l) for l in means]
        return _finish(a, CaseTag.D3_DIAG, {"l1": l1, "l2": l2, "l3": l3}, cols, sc)

    if len(groups) == 2:
        k = sizes.index(2)
        ld, ls = means[k], means[1 - k]
        nm = a - ld * eye
        if _rank(nm, RANK_TOL * sc) == 1:
            cols_d = _aligned_basis(_null_space(nm, 2).real)
            vals = sorted([(ld, cols_d[0]), (ld, cols_d[1]), (ls, _eigvec(a, ls))], key=lambda t: -t[0])
            params = {"l1": vals[0][0], "l2": vals[1][0], "l3": vals[2][0]}
            return _finish(a, CaseTag.D3_DIAG, params, [v for _, v in vals], sc)
        u = _fix_sign(_null_space(nm, 1)[:, 0].real)
        s2 = np.linalg.pinv(nm) @ u
        s1 = nm @ s2
        return _finish(a, CaseTag.D3_BLOCK2, {"l1": ld, "l2": ls}, [s1, s2, _eigvec(a, ls)], sc)

    lam = means[0]
    nm = a - lam * eye
    rank = _rank(nm, RANK_TOL * sc)
    if rank == 0:
        return _finish(a, CaseTag.D3_DIAG, {"l1": lam, "l2": lam, "l3": lam}, list(eye), sc)
    if rank == 1:
        s1, s2 = _chain_of_two(nm)
        ker = _null_space(nm, 2).real
        # component of the kernel orthogonal to s1
        e = s1 / np.linalg.norm(s1)
        cand = [k - np.dot(k, e) * e for k in ker.T]
        s3 = _fix_sign(max(cand, key=np.linalg.norm))
        return _finish(a, CaseTag.D3_BLOCK2, {"l1": lam, "l2": lam}, [s1, s2, s3], sc)
    n2 = nm @ nm
    u = _fix_sign(_null_space(nm, 1)[:, 0].real)
    s3 = np.linalg.pinv(n2) @ u
    s2 = nm @ s3
    s1 = nm @ s2
    return _finish(a, CaseTag.D3_BLOCK3, {"lam": lam}, [s1, s2, s3], sc)


def _finish(a, case, params, cols, sc) -> RealJordanForm:
    s = np.column_stack(cols)
    ill = False
    try:
        p = inverse(s)
    except SingularMatrix:
        p = np.linalg.pinv(s)
        ill = True
    if not ill and np.linalg.cond(s) > COND_LIMIT:
        ill = True
    if ill:
        warnings.warn(
            f"transform to {case} form is ill-conditioned (near-defective matrix)",
            IllConditionedTransform,
            stacklevel=3,
        )
    # exact zeros keep the identically-degenerate cases exact downstream
    params = {k: (0.0 if k != "b" and abs(v) <= CLUSTER_TOL * sc else float(v)) for k, v in params.items()}
    return RealJordanForm(case, params, canonical_matrix(case, params), p, s, ill, sc)


def is_simple_elementary_factor(form: RealJordanForm, lam: complex, tol: float | None = None) -> bool:
    """True iff every Jordan block belonging to ``lam`` has size one."""
    if tol is None:
        tol = CLUSTER_TOL * form.scale
    sizes = [size for ev, size in form.blocks() if abs(ev - complex(lam)) <= tol]
    if not sizes:
        raise NotAnEigenvalue(f"{lam} is not an eigenvalue of the {form.case} form")
    return all(size == 1 for size in sizes)
