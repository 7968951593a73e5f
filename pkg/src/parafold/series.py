"""Truncated complex power-series arithmetic.

Everything downstream (eigenvalue functions, canonical forms, normal forms)
reduces to coefficient manipulation of formal power series truncated at a
fixed order.  Series are immutable; every operation returns a new object and
the result order is the minimum of the operand orders, so a coefficient is
only ever reported when it is determined by the input data.

Coefficients are complex doubles.  A series is a *unit* when its constant
term exceeds ``UNIT_TOL`` in modulus.
"""

from __future__ import annotations

import cmath
import json
import math

import numpy as np

#: threshold below which a leading coefficient counts as zero
UNIT_TOL = 1e-12


class SeriesError(ValueError):
    """Base class for series precondition failures."""


class NotAUnit(SeriesError):
    """Constant term is (numerically) zero where an invertible one is needed."""


class NonZeroConstantTerm(SeriesError):
    """Inner series of a composition must vanish at the origin."""


class NotInvertible(SeriesError):
    """Linear coefficient is (numerically) zero, so no compositional inverse."""


class BadConstantTerm(SeriesError):
    """k-th root requires constant term 1."""


def _mul_raw(a, b):
    n = min(len(a), len(b))
    return np.convolve(a[:n], b[:n])[:n]


def _reciprocal_raw(c):
    n = len(c) - 1
    inv = np.zeros(n + 1, dtype=complex)
    inv[0] = 1.0 / c[0]
    for d in range(1, n + 1):
        inv[d] = -np.dot(c[1 : d + 1], inv[d - 1 :: -1]) / c[0]
    # one Newton polish squares the rounding residual of the recurrence
    corr = -_mul_raw(c, inv)
    corr[0] += 2.0
    return _mul_raw(inv, corr)


def _compose_raw(outer, inner):
    """Horner evaluation of outer at inner (inner constant term ignored)."""
    n = min(len(outer), len(inner)) - 1
    inner = inner[: n + 1]
    acc = np.zeros(n + 1, dtype=complex)
    acc[0] = outer[n]
    for d in range(n - 1, -1, -1):
        acc = np.convolve(acc, inner)[: n + 1]
        acc[0] += outer[d]
    return acc


class TruncatedSeries:
    """A power series sum_{n<=N} c_n x^n known exactly up to degree N."""

    __slots__ = ("_c",)

    def __init__(self, coefficients, order=None):
        c = np.asarray(coefficients, dtype=complex)
        if c.ndim != 1:
            raise ValueError("coefficient array must be one-dimensional")
        if order is not None:
            if order < 0:
                raise ValueError("order must be >= 0")
            if len(c) < order + 1:
                c = np.concatenate([c, np.zeros(order + 1 - len(c), dtype=complex)])
            else:
                c = c[: order + 1]
        self._c = c.copy()
        self._c.flags.writeable = False

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order):
        return cls(np.zeros(order + 1, dtype=complex))

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, order):
        """The series x."""
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def monomial(cls, degree, order, value=1.0):
        c = np.zeros(order + 1, dtype=complex)
        c[degree] = value
        return cls(c)

    # -- basic accessors ---------------------------------------------------

    @property
    def order(self):
        return len(self._c) - 1

    @property
    def coefficients(self):
        return self._c

    def __getitem__(self, n):
        return self._c[n]

    def __len__(self):
        return len(self._c)

    def __repr__(self):
        head = ", ".join(f"{c:.4g}" for c in self._c[:5])
        tail = ", ..." if self.order > 4 else ""
        return f"TruncatedSeries([{head}{tail}], order={self.order})"

    def is_unit(self, tol=UNIT_TOL):
        return abs(self._c[0]) > tol

    def truncated(self, order):
        """Restriction to a lower order (raises if asked to extend)."""
        if order > self.order:
            raise ValueError("cannot truncate upward; use extended()")
        return TruncatedSeries(self._c[: order + 1])

    def extended(self, order):
        """Zero-pad up to ``order``.

        The added coefficients are a statement that the caller knows them to
        vanish (e.g. polynomial data); this is not a truncation-safe
        operation in general.
        """
        if order < self.order:
            return self.truncated(order)
        return TruncatedSeries(self._c, order)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, float, complex, np.integer, np.floating, np.complexfloating)):
            return TruncatedSeries.constant(complex(other), self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.order, other.order)
        return TruncatedSeries(self._c[: n + 1] + other._c[: n + 1])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            prod = np.convolve(self._c[: n + 1], other._c[: n + 1])[: n + 1]
            return TruncatedSeries(prod)
        if isinstance(other, (int, float, complex, np.integer, np.floating, np.complexfloating)):
            return TruncatedSeries(self._c * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, np.integer)) or exponent < 0:
            raise ValueError("only non-negative integer powers")
        result = TruncatedSeries.constant(1.0, self.order)
        base = self
        e = int(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- calculus / structural helpers --------------------------------------

    def derivative(self):
        if self.order == 0:
            return TruncatedSeries.zero(0)
        return TruncatedSeries(self._c[1:] * np.arange(1, self.order + 1))

    def shift_up(self, s):
        """Multiply by x^s, truncating at the same order."""
        c = np.zeros(self.order + 1, dtype=complex)
        c[s:] = self._c[: self.order + 1 - s]
        return TruncatedSeries(c)

    def shift_down(self, s, tol=1e-9):
        """Divide by x^s; the dropped low coefficients must be negligible."""
        scale = max(np.abs(self._c).max(), 1.0)
        if s > 0 and np.abs(self._c[:s]).max() > tol * scale:
            raise SeriesError(f"series is not divisible by x^{s}")
        return TruncatedSeries(self._c[s:])

    def scale_argument(self, factor):
        """Precompose with x -> factor*x."""
        return TruncatedSeries(self._c * complex(factor) ** np.arange(self.order + 1))

    def upsample(self, m, order=None):
        """Interpret a series in zeta as a series in x^m (zeta = x^m)."""
        n = self.order if order is None else order
        c = np.zeros(n + 1, dtype=complex)
        top = min(self.order, n // m)
        c[: (top * m) + 1 : m] = self._c[: top + 1]
        return TruncatedSeries(c)

    def __call__(self, x):
        """Numerical evaluation by Horner's rule (scalars or arrays)."""
        acc = np.zeros_like(np.asarray(x, dtype=complex))
        for c in self._c[::-1]:
            acc = acc * x + c
        return acc if acc.shape else complex(acc)

    # -- the nontrivial operations ------------------------------------------

    def reciprocal(self, tol=UNIT_TOL):
        """Multiplicative inverse; requires a unit."""
        if not self.is_unit(tol):
            raise NotAUnit(f"constant term {self._c[0]!r} is below tolerance")
        return TruncatedSeries(_reciprocal_raw(self._c))

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        if isinstance(other, (int, float, complex, np.integer, np.floating, np.complexfloating)):
            return TruncatedSeries(self._c / complex(other))
        return NotImplemented

    def compose(self, inner, tol=UNIT_TOL):
        """self(inner(x)), requiring inner(0) = 0."""
        if abs(inner._c[0]) > tol:
            raise NonZeroConstantTerm("inner series must vanish at the origin")
        n = min(self.order, inner.order)
        return TruncatedSeries(_compose_raw(self._c[: n + 1], inner._c[: n + 1]))

    def reversion(self, tol=UNIT_TOL):
        """Compositional inverse g with self(g(x)) = x.

        Newton iteration on the composition equation, working at doubling
        truncation orders so that each sweep costs what it resolves.
        """
        if abs(self._c[0]) > tol:
            raise NonZeroConstantTerm("series must vanish at the origin")
        if len(self._c) < 2 or abs(self._c[1]) <= tol:
            raise NotInvertible("linear coefficient is numerically zero")
        n = self.order
        g = np.array([0.0, 1.0 / self._c[1]], dtype=complex)
        dself = np.zeros(n + 1, dtype=complex)
        dself[:n] = self.derivative()._c[: n]
        order = 1
        sweeps_left = 2  # polish passes at full order for rounding
        while True:
            order = min(2 * order + 1, n)
            if len(g) < order + 1:
                g = np.concatenate([g, np.zeros(order + 1 - len(g), dtype=complex)])
            residual = _compose_raw(self._c[: order + 1], g)
            residual[1] -= 1.0
            slope = _compose_raw(dself[: order + 1], g)
            g = g - _mul_raw(residual, _reciprocal_raw(slope))
            if order == n:
                sweeps_left -= 1
                if sweeps_left == 0:
                    break
        return TruncatedSeries(g)

    def kth_root(self, k, tol=1e-9):
        """The branch of the k-th root with value 1 at the origin.

        Requires constant term 1 (callers normalise first).
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        if abs(self._c[0] - 1.0) > tol:
            raise BadConstantTerm(f"constant term {self._c[0]!r} != 1")
        if k == 1:
            return self
        x = TruncatedSeries.constant(1.0, self.order)
        for _ in range(max(1, math.ceil(math.log2(self.order + 1))) + 2):
            # Newton for x^k = self
            x = x * ((k - 1) / k) + (self / k) * (x ** (k - 1)).reciprocal()
        return x

    def class_split(self, modulus):
        """Group coefficients by residue class of the exponent.

        Returns parts a_0..a_{modulus-1} with
        ``self(x) = sum_j x^j a_j(x^modulus)``.
        """
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        return [TruncatedSeries(self._c[j::modulus]) for j in range(modulus)]

    # -- serialization -------------------------------------------------------

    def to_dict(self, zero_tol=0.0):
        entries = [
            {"deg": int(d), "re": float(c.real), "im": float(c.imag)}
            for d, c in enumerate(self._c)
            if abs(c) > zero_tol
        ]
        return {"truncation": self.order, "coefficients": entries}

    @classmethod
    def from_dict(cls, data):
        order = int(data["truncation"])
        c = np.zeros(order + 1, dtype=complex)
        for entry in data["coefficients"]:
            c[int(entry["deg"])] = complex(entry.get("re", 0.0), entry.get("im", 0.0))
        return cls(c)

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text):
        return cls.from_dict(json.loads(text))


def class_join(parts, modulus, order):
    """Inverse of class_split: rebuild sum_j x^j a_j(x^modulus)."""
    c = np.zeros(order + 1, dtype=complex)
    for j, part in enumerate(parts):
        idx = j + modulus * np.arange(part.order + 1)
        keep = idx <= order
        c[idx[keep]] = part.coefficients[keep]
    return TruncatedSeries(c)


def exp_series(order, prefactor=1.0):
    """Taylor series of prefactor * exp(x)."""
    c = np.empty(order + 1, dtype=complex)
    c[0] = prefactor
    for n in range(1, order + 1):
        c[n] = c[n - 1] / n
    return TruncatedSeries(c)


def log1p_series(order):
    """Taylor series of log(1 + x)."""
    c = np.zeros(order + 1, dtype=complex)
    n = np.arange(1, order + 1, dtype=float)
    c[1:] = (-1.0) ** (n + 1) / n
    return TruncatedSeries(c)


def geometric_series(order, ratio=1.0):
    """1/(1 - ratio*x)."""
    return TruncatedSeries(complex(ratio) ** np.arange(order + 1))


class BivariateSeries:
    """Series sum c_{m,n} z^m eps^n truncated at orders (Nz, Neps).

    Used for one-parameter families omega_eps(z).  Coefficients live in an
    (Nz+1, Neps+1) array.
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients, z_order=None, eps_order=None):
        c = np.asarray(coefficients, dtype=complex)
        if c.ndim != 2:
            raise ValueError("coefficient array must be two-dimensional")
        nz = c.shape[0] - 1 if z_order is None else z_order
        ne = c.shape[1] - 1 if eps_order is None else eps_order
        full = np.zeros((nz + 1, ne + 1), dtype=complex)
        src = c[: nz + 1, : ne + 1]
        full[: src.shape[0], : src.shape[1]] = src
        self._c = full
        self._c.flags.writeable = False

    @classmethod
    def zero(cls, z_order, eps_order):
        return cls(np.zeros((z_order + 1, eps_order + 1), dtype=complex))

    @property
    def z_order(self):
        return self._c.shape[0] - 1

    @property
    def eps_order(self):
        return self._c.shape[1] - 1

    @property
    def coefficients(self):
        return self._c

    def __getitem__(self, mn):
        m, n = mn
        return self._c[m, n]

    def __add__(self, other):
        nz = min(self.z_order, other.z_order)
        ne = min(self.eps_order, other.eps_order)
        return BivariateSeries(self._c[: nz + 1, : ne + 1] + other._c[: nz + 1, : ne + 1])

    def __neg__(self):
        return BivariateSeries(-self._c)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return BivariateSeries(self._c * complex(other))
        nz = min(self.z_order, other.z_order)
        ne = min(self.eps_order, other.eps_order)
        out = np.zeros((nz + 1, ne + 1), dtype=complex)
        for p in range(ne + 1):
            for q in range(ne + 1 - p):
                out[:, p + q] += np.convolve(self._c[: nz + 1, p], other._c[: nz + 1, q])[: nz + 1]
        return BivariateSeries(out)

    __rmul__ = __mul__

    def eps_slice(self, n):
        """The z-series coefficient of eps^n."""
        return TruncatedSeries(self._c[:, n])

    def z_slice(self, m):
        """The eps-series coefficient of z^m."""
        return TruncatedSeries(self._c[m, :])

    def __call__(self, z, eps):
        """Numerical evaluation (Horner in both variables)."""
        acc = 0.0 + 0.0j
        for m in range(self.z_order, -1, -1):
            row = 0.0 + 0.0j
            for n in range(self.eps_order, -1, -1):
                row = row * eps + self._c[m, n]
            acc = acc * z + row
        return acc

    def dz(self):
        """Partial derivative in z."""
        if self.z_order == 0:
            return BivariateSeries.zero(0, self.eps_order)
        return BivariateSeries(self._c[1:, :] * np.arange(1, self.z_order + 1)[:, None])

    def deps(self):
        """Partial derivative in eps."""
        if self.eps_order == 0:
            return BivariateSeries.zero(self.z_order, 0)
        return BivariateSeries(self._c[:, 1:] * np.arange(1, self.eps_order + 1)[None, :])

    def eval_eps_series(self, f):
        """Substitute eps -> f(z); returns a univariate series in z.

        Exact for families polynomial in eps (the stored eps-order is the
        eps-degree); otherwise correct to the usual truncation caveats.
        """
        n = min(self.z_order, f.order)
        acc = TruncatedSeries(self._c[: n + 1, self.eps_order])
        ftr = TruncatedSeries(f.coefficients[: n + 1])
        for q in range(self.eps_order - 1, -1, -1):
            acc = acc * ftr + TruncatedSeries(self._c[: n + 1, q])
        return acc

    def compose_z(self, inner, tol=UNIT_TOL):
        """Substitute z -> inner(z~) slice by slice in eps."""
        if abs(inner.coefficients[0]) > tol:
            raise NonZeroConstantTerm("inner series must vanish at the origin")
        nz = min(self.z_order, inner.order)
        out = np.zeros((nz + 1, self.eps_order + 1), dtype=complex)
        for n in range(self.eps_order + 1):
            out[:, n] = TruncatedSeries(self._c[: nz + 1, n]).compose(inner).coefficients
        return BivariateSeries(out)

    def mul_z(self, factor):
        """Multiply every eps-slice by a univariate series in z."""
        nz = min(self.z_order, factor.order)
        out = np.zeros((nz + 1, self.eps_order + 1), dtype=complex)
        for n in range(self.eps_order + 1):
            out[:, n] = np.convolve(self._c[: nz + 1, n], factor.coefficients[: nz + 1])[: nz + 1]
        return BivariateSeries(out)

    def weighted_diagonal(self, weight, order):
        """Substitute (z, eps) -> (d, d^weight); series in d.

        Coefficient of d^s collects all c_{m,n} with m + weight*n = s.
        """
        c = np.zeros(order + 1, dtype=complex)
        for n in range(self.eps_order + 1):
            base = weight * n
            if base > order:
                break
            top = min(self.z_order, order - base)
            c[base : base + top + 1] += self._c[: top + 1, n]
        return TruncatedSeries(c)

    def to_dict(self, zero_tol=0.0):
        entries = []
        for m in range(self.z_order + 1):
            for n in range(self.eps_order + 1):
                c = self._c[m, n]
                if abs(c) > zero_tol:
                    entries.append(
                        {"m": m, "n": n, "re": float(c.real), "im": float(c.imag)}
                    )
        return {"Nz": self.z_order, "Neps": self.eps_order, "coefficients": entries}

    @classmethod
    def from_dict(cls, data):
        c = np.zeros((int(data["Nz"]) + 1, int(data["Neps"]) + 1), dtype=complex)
        for entry in data["coefficients"]:
            c[int(entry["m"]), int(entry["n"])] = complex(
                entry.get("re", 0.0), entry.get("im", 0.0)
            )
        return cls(c)


def principal_root(value, k):
    """Principal k-th root of a nonzero complex number."""
    if value == 0:
        raise ValueError("principal root of zero")
    return cmath.exp(cmath.log(value) / k)
