"""Problem instances: plant, cost weights, horizon, budget, and file IO.

An instance describes the discrete-time plant x[k+1] = A x[k] + B u[k],
an initial condition (a fixed state x0 or a zero-mean covariance sigma),
a horizon of N steps with control instants {0, ..., N-1}, a budget d of
instants at which the input may be nonzero, and quadratic weights
Q_0..Q_N (state, PSD) and R_0..R_{N-1} (input, PD).

The JSON file format is::

    {"A": [[...]], "B": [[...]],
     "x0": [...]  |  "sigma": [[...]],
     "N": int, "d": int,
     "Q": matrix | {"scalar": s} | [list of N+1 matrices],
     "QN": matrix (optional, only with the shorthand forms of "Q"),
     "R": matrix | {"scalar": s} | [list of N matrices]}

Matrices are row-major nested arrays of finite doubles.  A single matrix
or a ``{"scalar": s}`` entry (meaning ``s * I``) is replicated across all
steps; ``QN`` overrides the terminal state weight in that case.
"""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import DefinitenessError, DimensionMismatchError, InstanceParseError

# Validation tolerances (fixed; see README "Numerical conventions").
SYMMETRY_TOL = 1e-12
PSD_EIG_FLOOR = -1e-10
PD_EIG_FLOOR = 1e-12

Schedule = tuple[int, ...]


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Instance:
    """Immutable problem instance.

    Exactly one of ``x0`` (deterministic initial state) and ``sigma``
    (zero-mean initial-state covariance) must be set.  ``Qs`` holds the
    N+1 state weights Q_0..Q_N and ``Rs`` the N input weights
    R_0..R_{N-1}.
    """

    A: np.ndarray
    B: np.ndarray
    N: int
    d: int
    Qs: tuple[np.ndarray, ...]
    Rs: tuple[np.ndarray, ...]
    x0: np.ndarray | None = None
    sigma: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A))
        object.__setattr__(self, "B", _frozen(self.B))
        object.__setattr__(self, "Qs", tuple(_frozen(Q) for Q in self.Qs))
        object.__setattr__(self, "Rs", tuple(_frozen(R) for R in self.Rs))
        if self.x0 is not None:
            object.__setattr__(self, "x0", _frozen(np.asarray(self.x0).reshape(-1)))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", _frozen(self.sigma))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def is_deterministic(self) -> bool:
        return self.x0 is not None

    def with_budget(self, d: int) -> "Instance":
        return replace(self, d=d)


def as_schedule(indices, N: int) -> Schedule:
    """Normalize an iterable of time indices into a sorted schedule tuple.

    Raises ValueError on duplicates or indices outside {0, ..., N-1}.
    """
    idx = sorted(int(i) for i in indices)
    if any(t < 0 or t >= N for t in idx):
        raise ValueError(f"schedule indices must lie in [0, {N})")
    if any(a == b for a, b in zip(idx, idx[1:])):
        raise ValueError("schedule contains duplicate indices")
    return tuple(idx)


def _is_symmetric(M: np.ndarray) -> bool:
    return float(np.max(np.abs(M - M.T), initial=0.0)) <= SYMMETRY_TOL


def _min_eig(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((M + M.T) / 2.0)[0])


def _violations(inst: Instance) -> list[tuple[str, str]]:
    """All invariant violations as (kind, message); kind is one of
    'parse', 'dimension', 'definiteness'."""
    out: list[tuple[str, str]] = []
    n = inst.A.shape[0]

    if inst.A.ndim != 2 or inst.A.shape[0] != inst.A.shape[1]:
        out.append(("dimension", "A not square"))
        return out
    if not np.all(np.isfinite(inst.A)):
        out.append(("parse", "A contains non-finite entries"))
    if inst.B.ndim != 2 or inst.B.shape[0] != n:
        out.append(("dimension", "B row count does not match A"))
    elif not np.all(np.isfinite(inst.B)):
        out.append(("parse", "B contains non-finite entries"))

    if (inst.x0 is None) == (inst.sigma is None):
        out.append(("parse", "exactly one of x0 and sigma must be set"))
    elif inst.x0 is not None:
        if inst.x0.shape != (n,):
            out.append(("dimension", "x0 length does not match A"))
        elif not np.all(np.isfinite(inst.x0)):
            out.append(("parse", "x0 contains non-finite entries"))
    else:
        if inst.sigma.shape != (n, n):
            out.append(("dimension", "sigma shape does not match A"))
        elif not np.all(np.isfinite(inst.sigma)):
            out.append(("parse", "sigma contains non-finite entries"))
        elif not _is_symmetric(inst.sigma):
            out.append(("definiteness", "sigma not symmetric"))
        elif _min_eig(inst.sigma) < PSD_EIG_FLOOR:
            out.append(("definiteness", "sigma not positive semidefinite"))

    if inst.N < 1:
        out.append(("parse", "horizon must be positive"))
    if inst.d < 1:
        out.append(("parse", "budget below 1"))
    if inst.d > inst.N:
        out.append(("parse", "budget exceeds horizon"))

    if len(inst.Qs) != inst.N + 1:
        out.append(("dimension", f"expected {inst.N + 1} state weights, got {len(inst.Qs)}"))
    else:
        for k, Q in enumerate(inst.Qs):
            if Q.shape != (n, n):
                out.append(("dimension", f"Q_{k} has wrong shape"))
            elif not np.all(np.isfinite(Q)):
                out.append(("parse", f"Q_{k} contains non-finite entries"))
            elif not _is_symmetric(Q):
                out.append(("definiteness", f"Q_{k} not symmetric"))
            elif _min_eig(Q) < PSD_EIG_FLOOR:
                out.append(("definiteness", f"Q_{k} not positive semidefinite"))

    m = inst.B.shape[1] if inst.B.ndim == 2 else 0
    if len(inst.Rs) != inst.N:
        out.append(("dimension", f"expected {inst.N} input weights, got {len(inst.Rs)}"))
    else:
        for k, R in enumerate(inst.Rs):
            if R.shape != (m, m):
                out.append(("dimension", f"R_{k} has wrong shape"))
            elif not np.all(np.isfinite(R)):
                out.append(("parse", f"R_{k} contains non-finite entries"))
            elif not _is_symmetric(R):
                out.append(("definiteness", f"R_{k} not symmetric"))
            elif _min_eig(R) < PD_EIG_FLOOR:
                out.append(("definiteness", f"R_{k} not positive definite"))
    return out


def validate(inst: Instance) -> list[str]:
    """Return all invariant violations as messages; empty list means valid."""
    return [msg for _, msg in _violations(inst)]


def _raise_for_violations(inst: Instance) -> None:
    viol = _violations(inst)
    if not viol:
        return
    by_kind = {"dimension": DimensionMismatchError,
               "definiteness": DefinitenessError,
               "parse": InstanceParseError}
    for kind in ("dimension", "definiteness", "parse"):
        msgs = [msg for k, msg in viol if k == kind]
        if msgs:
            raise by_kind[kind]("; ".join(msgs))


def _as_matrix(obj, name: str) -> np.ndarray:
    try:
        M = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InstanceParseError(f"{name} is not a numeric matrix") from exc
    if M.ndim != 2:
        raise InstanceParseError(f"{name} is not a 2-d matrix")
    return M


def _expand_weights(obj, count: int, n: int, name: str,
                    terminal=None) -> list[np.ndarray]:
    """Expand matrix / {"scalar": s} / list-of-matrices shorthand to
    ``count`` full matrices.  ``terminal`` optionally overrides the last
    entry (only meaningful with the shorthand forms)."""
    if isinstance(obj, dict):
        if set(obj) != {"scalar"}:
            raise InstanceParseError(f'{name} dict form must be {{"scalar": s}}')
        try:
            base = float(obj["scalar"]) * np.eye(n)
        except (TypeError, ValueError) as exc:
            raise InstanceParseError(f"{name} scalar is not numeric") from exc
        mats = [base.copy() for _ in range(count)]
    else:
        try:
            arr = np.array(obj, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InstanceParseError(f"{name} has unrecognized form") from exc
        if arr.ndim == 2:
            mats = [arr.copy() for _ in range(count)]
        elif arr.ndim == 3:
            if terminal is not None:
                raise InstanceParseError(
                    f"QN conflicts with the per-step list form of {name}")
            if arr.shape[0] != count:
                raise InstanceParseError(
                    f"{name} list form must have {count} matrices, got {arr.shape[0]}")
            return [arr[k] for k in range(count)]
        else:
            raise InstanceParseError(f"{name} has unrecognized form")
    if terminal is not None:
        mats[-1] = _as_matrix(terminal, "QN")
    return mats


def instance_from_dict(data: dict) -> Instance:
    """Build and validate an Instance from a parsed JSON document."""
    if not isinstance(data, dict):
        raise InstanceParseError("instance document must be a JSON object")
    required = {"A", "B", "N", "d", "Q", "R"}
    missing = required - set(data)
    if missing:
        raise InstanceParseError(f"missing keys: {sorted(missing)}")
    if ("x0" in data) == ("sigma" in data):
        raise InstanceParseError('exactly one of "x0" and "sigma" must be given')

    A = _as_matrix(data["A"], "A")
    B = _as_matrix(data["B"], "B")
    try:
        N = int(data["N"])
        d = int(data["d"])
    except (TypeError, ValueError) as exc:
        raise InstanceParseError("N and d must be integers") from exc
    n = A.shape[0]

    Qs = _expand_weights(data["Q"], N + 1, n, "Q", terminal=data.get("QN"))
    Rs = _expand_weights(data["R"], N, B.shape[1] if B.ndim == 2 else n, "R")

    kwargs = {}
    if "x0" in data:
        x0 = np.asarray(data["x0"], dtype=float).reshape(-1)
        kwargs["x0"] = x0
    else:
        kwargs["sigma"] = _as_matrix(data["sigma"], "sigma")

    inst = Instance(A=A, B=B, N=N, d=d, Qs=tuple(Qs), Rs=tuple(Rs), **kwargs)
    _raise_for_violations(inst)
    return inst


def instance_to_dict(inst: Instance) -> dict:
    """Serialize an Instance to the JSON document layout (full per-step lists)."""
    doc = {
        "A": inst.A.tolist(),
        "B": inst.B.tolist(),
        "N": inst.N,
        "d": inst.d,
        "Q": [Q.tolist() for Q in inst.Qs],
        "R": [R.tolist() for R in inst.Rs],
    }
    if inst.is_deterministic:
        doc["x0"] = inst.x0.tolist()
    else:
        doc["sigma"] = inst.sigma.tolist()
    return doc


def load_instance(path) -> Instance:
    """Load and validate an instance file.

    Raises InstanceParseError (malformed document), DimensionMismatchError,
    or DefinitenessError.  Missing/unreadable files raise OSError.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"not valid JSON: {exc}") from exc
    return instance_from_dict(data)


def save_instance(inst: Instance, path) -> None:
    """Write an instance file that load_instance reads back identically."""
    Path(path).write_text(json.dumps(instance_to_dict(inst)) + "\n")
