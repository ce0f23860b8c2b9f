"""Dense 3-tensor (hypermatrix) type with exact-rational and float backends.

A tensor is an l x m x n array of scalars.  Entries are stored with the
third index fastest, then the second, then the first (C order), so the
flat serialization is unambiguous.  Two scalar backends exist and never
mix inside one tensor:

* ``"rational"`` -- entries are ``fractions.Fraction`` (always in lowest
  terms with positive denominator), held in an object-dtype numpy array.
  Used by the gadget builders so constructions are exact.
* ``"float"`` -- entries are float64.  Used by the iterative numerics.

Conversion between backends is explicit (``Tensor3.to_float``); mixing a
float vector into a rational operation raises ``TypeError``.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

RATIONAL = "rational"
FLOAT = "float"


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible with the tensor's dimensions."""


def _is_floatlike(x) -> bool:
    return isinstance(x, (float, np.floating))


def as_rational(x) -> Fraction:
    """Coerce ``x`` to an exact Fraction; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(
        f"cannot use {type(x).__name__} in an exact-rational tensor; "
        "convert the tensor to float explicitly instead"
    )


class Tensor3:
    """Dense order-3 tensor over exact rationals or float64."""

    __slots__ = ("data", "kind")

    def __init__(self, data: np.ndarray, kind: str):
        if data.ndim != 3:
            raise DimensionMismatch(f"expected 3 axes, got shape {data.shape}")
        if kind == FLOAT:
            data = np.ascontiguousarray(data, dtype=np.float64)
        elif kind == RATIONAL:
            if data.dtype != object:
                raise TypeError("rational tensors need an object-dtype array")
        else:
            raise ValueError(f"unknown scalar kind {kind!r}")
        self.data = data
        self.kind = kind

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_flat(cls, dims, entries, kind: str | None = None) -> "Tensor3":
        l, m, n = (int(d) for d in dims)
        if l < 1 or m < 1 or n < 1:
            raise DimensionMismatch(f"dimensions must be positive, got {dims}")
        entries = list(entries)
        if len(entries) != l * m * n:
            raise DimensionMismatch(
                f"expected {l * m * n} entries for dims {dims}, got {len(entries)}"
            )
        if kind is None:
            kind = FLOAT if any(_is_floatlike(e) for e in entries) else RATIONAL
        if kind == FLOAT:
            arr = np.array([float(e) for e in entries], dtype=np.float64)
        else:
            arr = np.empty(len(entries), dtype=object)
            arr[:] = [as_rational(e) for e in entries]
        return cls(arr.reshape(l, m, n), kind)

    @classmethod
    def from_nested(cls, nested, kind: str | None = None) -> "Tensor3":
        flat = [e for plane in nested for row in plane for e in row]
        dims = (len(nested), len(nested[0]), len(nested[0][0]))
        return cls.from_flat(dims, flat, kind)

    @classmethod
    def zeros(cls, l: int, m: int, n: int, kind: str = RATIONAL) -> "Tensor3":
        if kind == FLOAT:
            return cls(np.zeros((l, m, n)), FLOAT)
        arr = np.empty((l, m, n), dtype=object)
        arr[...] = Fraction(0)
        return cls(arr, RATIONAL)

    # -- basic protocol --------------------------------------------------

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.data.shape

    def __getitem__(self, idx):
        return self.data[idx]

    def flat_entries(self) -> list:
        return list(self.data.reshape(-1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.dims == other.dims
            and bool(np.array_equal(self.data, other.data))
        )

    __hash__ = None  # mutable payload

    def __repr__(self):
        l, m, n = self.dims
        return f"Tensor3(dims=({l},{m},{n}), kind={self.kind!r})"

    # -- arithmetic (same-kind only) --------------------------------------

    def _check_same(self, other: "Tensor3"):
        if self.kind != other.kind:
            raise TypeError("cannot mix rational and float tensors; convert explicitly")
        if self.dims != other.dims:
            raise DimensionMismatch(f"dims {self.dims} vs {other.dims}")

    def __add__(self, other: "Tensor3") -> "Tensor3":
        self._check_same(other)
        return Tensor3(self.data + other.data, self.kind)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        self._check_same(other)
        return Tensor3(self.data - other.data, self.kind)

    def scale(self, c) -> "Tensor3":
        if self.kind == RATIONAL:
            c = as_rational(c)
        else:
            c = float(c)
        return Tensor3(self.data * c, self.kind)

    def to_float(self) -> "Tensor3":
        if self.kind == FLOAT:
            return Tensor3(self.data.copy(), FLOAT)
        return Tensor3(self.data.astype(np.float64), FLOAT)

    def is_zero(self) -> bool:
        if self.kind == FLOAT:
            return not np.any(self.data)
        return all(e == 0 for e in self.data.reshape(-1))


# -- vector/matrix coercion ------------------------------------------------


def _coerce_vector(x, size: int, kind: str, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=object if kind == RATIONAL else np.float64)
    if arr.ndim != 1 or arr.shape[0] != size:
        raise DimensionMismatch(f"{name} must have length {size}, got shape {arr.shape}")
    if kind == RATIONAL:
        out = np.empty(size, dtype=object)
        out[:] = [as_rational(e) for e in arr]
        return out
    return arr


def _coerce_matrix(x, rows: int, kind: str, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=object if kind == RATIONAL else np.float64)
    if arr.ndim != 2 or arr.shape[0] != rows:
        raise DimensionMismatch(f"{name} must have {rows} rows, got shape {arr.shape}")
    if kind == RATIONAL:
        out = np.empty(arr.shape, dtype=object)
        for i in range(arr.shape[0]):
            for j in range(arr.shape[1]):
                out[i, j] = as_rational(arr[i, j])
        return out
    return arr


def _infer_kind(*vectors) -> str:
    for v in vectors:
        for e in np.asarray(v, dtype=object).reshape(-1):
            if _is_floatlike(e):
                return FLOAT
    return RATIONAL


# -- operations --------------------------------------------------------------


def outer_product(x, y, z) -> Tensor3:
    """Rank-1 tensor with entries x_i * y_j * z_k."""
    kind = _infer_kind(x, y, z)
    xv = _coerce_vector(x, len(x), kind, "x")
    yv = _coerce_vector(y, len(y), kind, "y")
    zv = _coerce_vector(z, len(z), kind, "z")
    if kind == FLOAT:
        return Tensor3(np.einsum("i,j,k->ijk", xv, yv, zv), FLOAT)
    l, m, n = len(xv), len(yv), len(zv)
    out = np.empty((l, m, n), dtype=object)
    for i in range(l):
        for j in range(m):
            xy = xv[i] * yv[j]
            for k in range(n):
                out[i, j, k] = xy * zv[k]
    return Tensor3(out, RATIONAL)


def mlmul(A: Tensor3, X, Y, Z) -> Tensor3:
    """Multiply A on its three sides: c_abc = sum_ijk a_ijk X_ia Y_jb Z_kc."""
    l, m, n = A.dims
    Xm = _coerce_matrix(X, l, A.kind, "X")
    Ym = _coerce_matrix(Y, m, A.kind, "Y")
    Zm = _coerce_matrix(Z, n, A.kind, "Z")
    if A.kind == FLOAT:
        return Tensor3(np.einsum("ijk,ia,jb,kc->abc", A.data, Xm, Ym, Zm), FLOAT)
    p, q, r = Xm.shape[1], Ym.shape[1], Zm.shape[1]
    out = np.empty((p, q, r), dtype=object)
    # contract one mode at a time to keep the exact loop count manageable
    t1 = np.empty((p, m, n), dtype=object)
    for a in range(p):
        for j in range(m):
            for k in range(n):
                t1[a, j, k] = sum((A.data[i, j, k] * Xm[i, a] for i in range(l)), Fraction(0))
    t2 = np.empty((p, q, n), dtype=object)
    for a in range(p):
        for b in range(q):
            for k in range(n):
                t2[a, b, k] = sum((t1[a, j, k] * Ym[j, b] for j in range(m)), Fraction(0))
    for a in range(p):
        for b in range(q):
            for c in range(r):
                out[a, b, c] = sum((t2[a, b, k] * Zm[k, c] for k in range(n)), Fraction(0))
    return Tensor3(out, A.kind)


def trilinear_form(A: Tensor3, x, y, z):
    """The scalar sum_ijk a_ijk x_i y_j z_k."""
    l, m, n = A.dims
    xv = _coerce_vector(x, l, A.kind, "x")
    yv = _coerce_vector(y, m, A.kind, "y")
    zv = _coerce_vector(z, n, A.kind, "z")
    if A.kind == FLOAT:
        return float(np.einsum("ijk,i,j,k->", A.data, xv, yv, zv))
    total = Fraction(0)
    for i in range(l):
        if xv[i] == 0:
            continue
        for j in range(m):
            if yv[j] == 0:
                continue
            c = xv[i] * yv[j]
            for k in range(n):
                total += A.data[i, j, k] * c * zv[k]
    return total


def contract(A: Tensor3, x=None, y=None, z=None):
    """Contract vectors into 0-3 slots, identity in the rest.

    Returns a Tensor3 (no vectors), a matrix (one vector), a vector (two
    vectors), or a scalar (three vectors, equal to ``trilinear_form``).
    """
    l, m, n = A.dims
    slots = []
    if x is not None:
        slots.append(("i", _coerce_vector(x, l, A.kind, "x")))
    if y is not None:
        slots.append(("j", _coerce_vector(y, m, A.kind, "y")))
    if z is not None:
        slots.append(("k", _coerce_vector(z, n, A.kind, "z")))
    if len(slots) == 3:
        return trilinear_form(A, x, y, z)
    if not slots:
        return Tensor3(A.data.copy(), A.kind)
    if A.kind == FLOAT:
        spec = "ijk," + ",".join(ax for ax, _ in slots)
        keep = "".join(ax for ax in "ijk" if ax not in {a for a, _ in slots})
        out = np.einsum(f"{spec}->{keep}", A.data, *(v for _, v in slots))
        return out
    # exact path: sum over the contracted axes with explicit loops
    contracted = {ax: v for ax, v in slots}
    keep_axes = [ax for ax in "ijk" if ax not in contracted]
    sizes = dict(zip("ijk", (l, m, n)))
    out_shape = tuple(sizes[ax] for ax in keep_axes)
    out = np.empty(out_shape, dtype=object)
    out[...] = Fraction(0)
    for i in range(l):
        wi = contracted["i"][i] if "i" in contracted else None
        if wi == 0:
            continue
        for j in range(m):
            wj = contracted["j"][j] if "j" in contracted else None
            if wj == 0:
                continue
            for k in range(n):
                wk = contracted["k"][k] if "k" in contracted else None
                if wk == 0:
                    continue
                term = A.data[i, j, k]
                if term == 0:
                    continue
                for w in (wi, wj, wk):
                    if w is not None:
                        term = term * w
                idx = tuple({"i": i, "j": j, "k": k}[ax] for ax in keep_axes)
                out[idx] += term
    return out


def frobenius_norm_sq(A: Tensor3):
    """Exact sum of squared entries (Fraction for rational tensors)."""
    if A.kind == FLOAT:
        return float(np.sum(A.data * A.data))
    return sum((e * e for e in A.data.reshape(-1)), Fraction(0))


def _fraction_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    np_, dp = q.numerator, q.denominator
    rn, rd = math.isqrt(np_), math.isqrt(dp)
    if rn * rn == np_ and rd * rd == dp:
        return Fraction(rn, rd)
    return None


def frobenius_norm(A: Tensor3):
    """Frobenius norm; exact Fraction when the square root is rational."""
    s = frobenius_norm_sq(A)
    if A.kind == FLOAT:
        return math.sqrt(s)
    r = _fraction_sqrt(s)
    return r if r is not None else math.sqrt(s)


def delta_tensor(n: int, kind: str = RATIONAL) -> Tensor3:
    """The n x n x n tensor with 1 exactly on the diagonal i=j=k."""
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    T = Tensor3.zeros(n, n, n, kind=kind)
    one = 1.0 if kind == FLOAT else Fraction(1)
    for i in range(n):
        T.data[i, i, i] = one
    return T


_PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def is_symmetric(A: Tensor3) -> bool:
    """True iff all six index permutations leave the tensor unchanged."""
    l, m, n = A.dims
    if not l == m == n:
        raise DimensionMismatch("symmetry is only defined for cubical tensors")
    for p in _PERMS[1:]:
        if not np.array_equal(A.data, np.transpose(A.data, p)):
            return False
    return True


def symmetrize(A: Tensor3) -> Tensor3:
    """Average of the six permuted copies of a cubical tensor."""
    l, m, n = A.dims
    if not l == m == n:
        raise DimensionMismatch("symmetrization needs a cubical tensor")
    acc = sum(np.transpose(A.data, p) for p in _PERMS)
    if A.kind == FLOAT:
        return Tensor3(acc / 6.0, FLOAT)
    out = np.empty(A.data.shape, dtype=object)
    for idx in np.ndindex(A.data.shape):
        out[idx] = acc[idx] / 6
    return Tensor3(out, RATIONAL)


# -- serialization ------------------------------------------------------------


class TensorFormatError(ValueError):
    """Malformed tensor file; message carries location info when known."""


def tensor_to_json(A: Tensor3) -> str:
    if A.kind == RATIONAL:
        entries = [str(e) for e in A.data.reshape(-1)]
    else:
        entries = [float(e) for e in A.data.reshape(-1)]
    return json.dumps({"dims": list(A.dims), "entries": entries})


def tensor_from_json(text: str) -> Tensor3:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise TensorFormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(obj, dict) or "dims" not in obj or "entries" not in obj:
        raise TensorFormatError("tensor file must be an object with 'dims' and 'entries'")
    dims = obj["dims"]
    if not (isinstance(dims, list) and len(dims) == 3 and all(isinstance(d, int) and d > 0 for d in dims)):
        raise TensorFormatError(f"'dims' must be three positive integers, got {dims!r}")
    entries = obj["entries"]
    if not isinstance(entries, list):
        raise TensorFormatError("'entries' must be a flat array")
    has_float = any(isinstance(e, float) for e in entries)
    parsed = []
    for pos, e in enumerate(entries):
        if isinstance(e, str):
            if has_float:
                raise TensorFormatError(f"entry {pos}: rational string mixed with float entries")
            try:
                parsed.append(Fraction(e))
            except (ValueError, ZeroDivisionError) as exc:
                raise TensorFormatError(f"entry {pos}: bad rational literal {e!r}") from exc
        elif isinstance(e, bool):
            raise TensorFormatError(f"entry {pos}: booleans are not scalars")
        elif isinstance(e, (int, float)):
            parsed.append(float(e) if has_float else Fraction(e))
        else:
            raise TensorFormatError(f"entry {pos}: unsupported value {e!r}")
    try:
        return Tensor3.from_flat(dims, parsed, FLOAT if has_float else RATIONAL)
    except DimensionMismatch as e:
        raise TensorFormatError(str(e)) from e


def save_tensor(A: Tensor3, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(tensor_to_json(A))
        fh.write("\n")


def load_tensor(path) -> Tensor3:
    with open(path, "r", encoding="utf-8") as fh:
        return tensor_from_json(fh.read())
