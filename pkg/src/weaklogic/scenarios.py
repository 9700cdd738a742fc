"""Pre/post-selection scenarios: built-in fixtures, file format and reports.

Scenario documents are JSON objects with the fields

``name``
    free text.
``dim``
    Hilbert space dimension.
``pre``, ``post``
    lists of ``[re, im]`` amplitude pairs (normalized on load).
``observables``
    list of ``{"label": str, "kind": "general"|"hermitian"|"projector",
    "matrix": dim x dim nested list of [re, im]}``.
``identity_observable`` (optional)
    label of the observable whose ``(Psi N)^2 = c Psi N`` coefficients are
    reported as a summary line.

Unknown fields are rejected.  The labels ``pre`` and ``post`` are reserved:
they name the selection projectors ``|pre><pre|`` and ``|post><post|``.

The Hardy fixture uses the basis order
``(O_p O_e, O_p NO_e, NO_p O_e, NO_p NO_e)``, where ``O`` means the
particle went through the overlap region and ``p``/``e`` label the
positron/electron.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from .core import Kind, Operator, StateVector, basis_state, inner, projector, tensor
from .errors import (
    DimMismatch,
    NotProportional,
    OrthogonalSelection,
    ParseError,
    UnknownLabel,
    ValidationError,
)
from .logic import product_coefficient
from .weak import WeakValueReport, classify, classify_observable, weak_value

RESERVED_LABELS = ("pre", "post")
HARDY_PAIR_LABELS = ("N_O,O", "N_O,NO", "N_NO,O", "N_NO,NO")
HARDY_SINGLE_LABELS = ("N+_O", "N+_NO", "N-_O", "N-_NO")

_TOP_FIELDS = {"name", "dim", "pre", "post", "observables", "identity_observable"}
_OBS_FIELDS = {"label", "kind", "matrix"}


@dataclass(frozen=True)
class Scenario:
    name: str
    pre: StateVector
    post: StateVector
    observables: Tuple[Tuple[str, Operator], ...]
    identity_observable: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "observables", tuple((str(l), op) for l, op in self.observables))
        dims = {self.pre.dim, self.post.dim} | {op.dim for _, op in self.observables}
        if len(dims) != 1:
            raise DimMismatch(f"scenario {self.name!r} mixes dimensions {sorted(dims)}")
        labels = [l for l, _ in self.observables]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate observable labels in {self.name!r}")
        bad = set(labels) & set(RESERVED_LABELS)
        if bad:
            raise ValidationError(f"observable label {sorted(bad)[0]!r} is reserved")
        if self.identity_observable is not None and self.identity_observable not in labels:
            raise ValidationError(f"identity_observable {self.identity_observable!r} is not an observable label")

    @property
    def dim(self) -> int:
        return self.pre.dim

    @property
    def labels(self) -> List[str]:
        return [l for l, _ in self.observables]

    @property
    def overlap_probability(self) -> float:
        return abs(inner(self.post, self.pre)) ** 2

    def observable(self, label: str) -> Operator:
        if label == "pre":
            return projector(self.pre)
        if label == "post":
            return projector(self.post)
        for l, op in self.observables:
            if l == label:
                return op
        raise UnknownLabel(f"unknown observable label {label!r}; known: {', '.join(self.labels)}")


# built-in fixtures ---------------------------------------------------------

def _hardy_ket(positron: str, electron: str) -> StateVector:
    idx = {"O": 0, "NO": 1}
    return tensor(basis_state(2, idx[positron]), basis_state(2, idx[electron]))


def _number_operator(positron: str, electron: str) -> Operator:
    return projector(_hardy_ket(positron, electron))


def hardy_states() -> Tuple[StateVector, StateVector]:
    """Pre-selected and post-selected states of the Hardy interferometer pair."""
    k = {(p, e): _hardy_ket(p, e).amplitudes for p in ("O", "NO") for e in ("O", "NO")}
    pre = StateVector(k["O", "NO"] + k["NO", "O"] + k["NO", "NO"])
    post = StateVector(k["O", "O"] - k["O", "NO"] - k["NO", "O"] + k["NO", "NO"])
    return pre, post


def hardy_scenario() -> Scenario:
    pre, post = hardy_states()
    pair = {(p, e): _number_operator(p, e) for p in ("O", "NO") for e in ("O", "NO")}
    observables = [(f"N_{p},{e}", pair[p, e]) for p in ("O", "NO") for e in ("O", "NO")]
    for which in ("O", "NO"):
        op = pair[which, "O"] + pair[which, "NO"]
        observables.append((f"N+_{which}", Operator(op.matrix, Kind.PROJECTOR)))
    for which in ("O", "NO"):
        op = pair["O", which] + pair["NO", which]
        observables.append((f"N-_{which}", Operator(op.matrix, Kind.PROJECTOR)))
    return Scenario("hardy", pre, post, tuple(observables), identity_observable="N_NO,NO")


def three_box_scenario() -> Scenario:
    pre = StateVector([1, 1, 1])
    post = StateVector([1, 1, -1])
    boxes = tuple((f"box{i + 1}", projector(basis_state(3, i))) for i in range(3))
    return Scenario("threebox", pre, post, boxes)


BUILTIN = {"hardy": hardy_scenario, "threebox": three_box_scenario}


def identity_coefficients(scenario: Scenario, label: str) -> Tuple[float, float]:
    """Coefficients ``c`` in ``Psi N Psi N = c Psi N`` and ``Phi N Phi N = c Phi N``."""
    op = scenario.observable(label)
    psi_c, _ = product_coefficient(projector(scenario.post), op)
    phi_c, _ = product_coefficient(projector(scenario.pre), op)
    return psi_c, phi_c


def hardy_identity_coefficients() -> Tuple[float, float]:
    return identity_coefficients(hardy_scenario(), "N_NO,NO")


def _ratio_products(pre, post, ops):
    return np.array([op.expectation(post).real * op.expectation(pre).real for op in ops])


def _normalize_max(products):
    top = np.max(products) if len(products) else 0.0
    if top <= 0:
        return [0.0] * len(products)
    return [float(p / top) for p in products]


def hardy_ratio_table(pre: StateVector = None, post: StateVector = None,
                      normalize: bool = True) -> List[float]:
    """``Pr(N|Psi) Pr(N|Phi)`` over the four pair operators, scaled so the maximum is 1.

    ``pre``/``post`` default to the Hardy states; ``normalize=False`` returns
    the raw products.
    """
    s = hardy_scenario()
    pre = s.pre if pre is None else pre
    post = s.post if post is None else post
    products = _ratio_products(pre, post, [s.observable(l) for l in HARDY_PAIR_LABELS])
    if not normalize:
        return [float(p) for p in products]
    return _normalize_max(products)


# reports -------------------------------------------------------------------

@dataclass(frozen=True)
class ReportRow:
    label: str
    kind: Kind
    value: complex
    weak: Optional[WeakValueReport]  # None for non-Hermitian observables
    psi_coeff: Optional[float] = None
    phi_coeff: Optional[float] = None

    @property
    def classification(self):
        return None if self.weak is None else self.weak.classification


@dataclass(frozen=True)
class ScenarioReport:
    name: str
    overlap_probability: float
    rows: Tuple[ReportRow, ...]
    ratio_labels: Tuple[str, ...] = ()
    ratio_table: Tuple[float, ...] = ()
    identity_label: Optional[str] = None
    identity_coefficients: Optional[Tuple[float, float]] = None

    def row(self, label: str) -> ReportRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise UnknownLabel(label)


def _coefficient_or_none(left, right):
    try:
        c, _ = product_coefficient(left, right)
    except NotProportional:
        return None
    return c


def report(s: Scenario, tol: float = 1e-10) -> ScenarioReport:
    if s.overlap_probability <= 1e-24:
        raise OrthogonalSelection("post-selection impossible: <post|pre> = 0")
    psi_hat, phi_hat = projector(s.post), projector(s.pre)
    rows = []
    ratio_ops = []
    for label, op in s.observables:
        if op.is_projector:
            rep = classify(op, s.pre, s.post, tol)
        elif op.is_hermitian:
            rep = classify_observable(op, s.pre, s.post, tol)
        else:
            rep = None
        value = rep.value if rep is not None else weak_value(op, s.pre, s.post)
        rows.append(ReportRow(
            label, op.kind, value, rep,
            _coefficient_or_none(psi_hat, op), _coefficient_or_none(phi_hat, op),
        ))
        if op.is_projector and round(op.trace().real) == 1:
            ratio_ops.append((label, op))
    ratio = _normalize_max(_ratio_products(s.pre, s.post, [op for _, op in ratio_ops]))
    coeffs = None
    if s.identity_observable is not None:
        coeffs = identity_coefficients(s, s.identity_observable)
    return ScenarioReport(
        name=s.name,
        overlap_probability=s.overlap_probability,
        rows=tuple(rows),
        ratio_labels=tuple(l for l, _ in ratio_ops),
        ratio_table=tuple(ratio),
        identity_label=s.identity_observable,
        identity_coefficients=coeffs,
    )


# serialization ---------------------------------------------------------------

def _pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def scenario_to_dict(s: Scenario) -> dict:
    doc = {
        "name": s.name,
        "dim": s.dim,
        "pre": _pairs(s.pre.amplitudes),
        "post": _pairs(s.post.amplitudes),
        "observables": [
            {"label": label, "kind": op.kind.value,
             "matrix": [_pairs(row) for row in op.matrix]}
            for label, op in s.observables
        ],
    }
    if s.identity_observable is not None:
        doc["identity_observable"] = s.identity_observable
    return doc


def dump_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2)


def _complex_list(raw, where: str, length: int) -> np.ndarray:
    if not isinstance(raw, list):
        raise ParseError(f"{where}: expected a list of [re, im] pairs")
    out = []
    for i, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise ParseError(f"{where}[{i}]: expected [re, im] numbers, got {pair!r}")
        out.append(complex(pair[0], pair[1]))
    if len(out) != length:
        raise ValidationError(f"{where}: expected {length} entries, got {len(out)}")
    return np.array(out, dtype=complex)


def _state(raw, where, dim):
    try:
        return StateVector(_complex_list(raw, where, dim))
    except ParseError:
        raise
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}") from None


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise ParseError(f"unknown field(s): {', '.join(sorted(unknown))}")
    missing = {"name", "dim", "pre", "post", "observables"} - set(doc)
    if missing:
        raise ParseError(f"missing field(s): {', '.join(sorted(missing))}")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValidationError(f"dim: expected a positive integer, got {dim!r}")
    if not isinstance(doc["name"], str):
        raise ParseError("name: expected a string")
    pre = _state(doc["pre"], "pre", dim)
    post = _state(doc["post"], "post", dim)
    if not isinstance(doc["observables"], list):
        raise ParseError("observables: expected a list")
    observables = []
    for i, obs in enumerate(doc["observables"]):
        where = f"observables[{i}]"
        if not isinstance(obs, dict):
            raise ParseError(f"{where}: expected an object")
        unknown = set(obs) - _OBS_FIELDS
        if unknown:
            raise ParseError(f"{where}: unknown field(s): {', '.join(sorted(unknown))}")
        if set(obs) != _OBS_FIELDS:
            raise ParseError(f"{where}: needs fields label, kind, matrix")
        label = obs["label"]
        if not isinstance(label, str):
            raise ParseError(f"{where}.label: expected a string")
        where = f"{where} ({label!r})"
        try:
            kind = Kind(obs["kind"])
        except ValueError:
            raise ParseError(f"{where}.kind: expected one of general, hermitian, projector") from None
        rows = obs["matrix"]
        if not isinstance(rows, list):
            raise ParseError(f"{where}.matrix: expected a list of rows")
        if len(rows) != dim:
            raise ValidationError(f"{where}.matrix: expected {dim} rows, got {len(rows)}")
        mat = np.array([_complex_list(r, f"{where}.matrix[{j}]", dim) for j, r in enumerate(rows)])
        try:
            op = Operator(mat, kind)
        except ValidationError as exc:
            raise type(exc)(f"{where}: {exc}") from None
        observables.append((label, op))
    return Scenario(doc["name"], pre, post, tuple(observables), doc.get("identity_observable"))


def load_scenario(source: Union[str, Path, dict]) -> Scenario:
    """Load a scenario from a JSON string, a file path, a dict, or a built-in name."""
    if isinstance(source, dict):
        return scenario_from_dict(source)
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    elif isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    elif isinstance(source, str) and source in BUILTIN:
        return BUILTIN[source]()
    else:
        path = Path(source)
        if not path.exists():
            raise ParseError(f"no such scenario file or built-in: {source}")
        text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    return scenario_from_dict(doc)
