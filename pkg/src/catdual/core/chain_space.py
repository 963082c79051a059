"""
Chain Hilbert Spaces

Enumerates the constrained basis of a one-dimensional chain built from a
module category: module labels A_i on sites, base objects alpha on links and
hom vectors v in Hom(A_i ◁ alpha, A_{i+1}).

Ring layout: labels A_0..A_{N-1} and links 0..N-1, link k joining A_k to
A_{k+1}. The last link lands on the closure label A_N, which is A_0 on an
untwisted ring and A_0 ◁ t for an invertible boundary twist t. Open layout:
labels A_0..A_N and N links.

A bond at site i acts on (A_{i-1}, link i-1, A_i, link i, A_{i+1}); on a ring
the bond at site 0 is the closure bond and sees link N-1 on its left.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

from .checks import CheckReport
from .errors import (
    GeometryError,
    LabelNotFoundError,
    NotRealizableError,
    ValidationError,
)
from .fusion_core import FusionCategory, Label, _decode, _encode, abelian_characters
from .graded import total_parity
from .module_data import ModuleCategory

logger = logging.getLogger(__name__)

GEOMETRIES = ("ring", "open")


@dataclass
class ChainSpec:
    """Geometry and label constraints of a finite chain.

    ``strands`` lists the allowed base objects per link (None: all objects),
    ``sites`` the allowed module labels per site (None: all labels), and
    ``boundary`` fixes the end labels of an open chain (None leaves an end free).
    """
    length: int
    geometry: str = "ring"
    strands: Optional[List[List[Label]]] = None
    twist: Optional[Label] = None
    boundary: Optional[Tuple[Optional[Label], Optional[Label]]] = None
    sites: Optional[List[List[Label]]] = None

    def __post_init__(self):
        if self.geometry not in GEOMETRIES:
            raise GeometryError(f"geometry must be one of {GEOMETRIES}, got {self.geometry!r}")
        if int(self.length) < 1:
            raise ValidationError(f"chain length must be positive, got {self.length}")
        if self.geometry == "ring" and self.length < 2:
            raise ValidationError("rings need at least two sites")
        if self.twist is not None and self.geometry != "ring":
            raise GeometryError("boundary twists are only defined on rings")
        if self.boundary is not None and self.geometry != "open":
            raise GeometryError("fixed end labels are only defined on open chains")
        if self.strands is not None:
            if len(self.strands) != self.n_links:
                raise ValidationError(f"expected strands for {self.n_links} links, got {len(self.strands)}")
            for k, allowed in enumerate(self.strands):
                if not allowed:
                    raise ValidationError(f"link {k} allows no strand object")
        if self.sites is not None and len(self.sites) != self.n_labels:
            raise ValidationError(f"expected label sets for {self.n_labels} sites, got {len(self.sites)}")

    @property
    def n_links(self) -> int:
        return self.length

    @property
    def n_labels(self) -> int:
        return self.length if self.geometry == "ring" else self.length + 1

    @classmethod
    def uniform(cls, length: int, strand: Optional[List[Label]] = None, **kwargs) -> "ChainSpec":
        """Same allowed strand objects on every link."""
        strands = None if strand is None else [list(strand) for _ in range(length)]
        return cls(length=length, strands=strands, **kwargs)

    def allowed_strands(self, k: int, objects: List[Label]) -> List[Label]:
        if self.strands is None:
            return list(objects)
        wanted = set(self.strands[k])
        return [x for x in objects if x in wanted]

    def allowed_labels(self, i: int, ids: List[Label]) -> List[Label]:
        if self.sites is None:
            return list(ids)
        wanted = set(self.sites[i])
        return [x for x in ids if x in wanted]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "length": self.length,
            "geometry": self.geometry,
            "strands": None if self.strands is None else [[_encode(x) for x in s] for s in self.strands],
            "twist": None if self.twist is None else _encode(self.twist),
            "boundary": None if self.boundary is None else [
                None if x is None else _encode(x) for x in self.boundary
            ],
            "sites": None if self.sites is None else [[_encode(x) for x in s] for s in self.sites],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ChainSpec":
        """Parse the JSON chain block; ``"strands": {"all": [...]}`` broadcasts."""
        length = int(data["length"])
        strands = data.get("strands")
        if isinstance(strands, dict):
            strands = [[_decode(x) for x in strands["all"]] for _ in range(length)]
        elif strands is not None:
            strands = [[_decode(x) for x in s] for s in strands]
        boundary = data.get("boundary")
        if boundary is not None:
            boundary = tuple(None if x is None else _decode(x) for x in boundary)
        sites = data.get("sites")
        if sites is not None:
            sites = [[_decode(x) for x in s] for s in sites]
        twist = data.get("twist")
        return cls(
            length=length,
            geometry=data.get("geometry", "ring"),
            strands=strands,
            twist=None if twist is None else _decode(twist),
            boundary=boundary,
            sites=sites,
        )


@dataclass(frozen=True)
class BasisState:
    """One admissible labelling; ``homs[k]`` indexes the hom space of link k."""
    labels: Tuple[Label, ...]
    links: Tuple[Label, ...]
    homs: Tuple[int, ...]


@dataclass(frozen=True)
class LocalConfig:
    """What a bond at one site sees: two links around a centre label."""
    left: Label
    alpha: Label
    va: int
    center: Label
    beta: Label
    vb: int
    right: Label


@dataclass
class TwistData:
    """Resolved boundary twist of a ring."""
    label: Optional[Label] = None
    target: Dict[Label, Label] = field(default_factory=dict)
    source: Dict[Label, Label] = field(default_factory=dict)
    character: Optional[Dict[Label, complex]] = None

    @property
    def geometric(self) -> bool:
        return bool(self.target)


class ChainBasis:
    """Ordered basis of a chain with a state <-> index bijection."""

    def __init__(self, module: ModuleCategory, spec: ChainSpec, states: List[BasisState], twist: TwistData):
        self.module = module
        self.spec = spec
        self.states = list(states)
        self.twist = twist
        self._index = {s: n for n, s in enumerate(self.states)}
        if len(self._index) != len(self.states):
            raise ValidationError("duplicate basis states")
        self._parities = [self._link_parities(s) for s in self.states] if module.graded else None

    @property
    def dim(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[BasisState]:
        return iter(self.states)

    @property
    def is_ring(self) -> bool:
        return self.spec.geometry == "ring"

    # -- indexing ----------------------------------------------------------

    def state_index(self, state: BasisState) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise LabelNotFoundError(f"state {state} is not in the basis") from None

    def find(self, state: BasisState) -> Optional[int]:
        return self._index.get(state)

    def unindex(self, n: int) -> BasisState:
        if not 0 <= n < len(self.states):
            raise IndexError(f"basis index {n} outside [0, {len(self.states)})")
        return self.states[n]

    # -- labels and parities ----------------------------------------------

    def closure(self, state: BasisState) -> Label:
        """The label the last link of a ring lands on (A_N)."""
        A0 = state.labels[0]
        return self.twist.target[A0] if self.twist.geometric else A0

    def link_ends(self, state: BasisState, k: int) -> Tuple[Label, Label]:
        if self.is_ring and k == self.spec.length - 1:
            return state.labels[k], self.closure(state)
        return state.labels[k], state.labels[k + 1]

    def link_objects(self, state: BasisState) -> Tuple[Label, ...]:
        return state.links

    def module_labels(self, state: BasisState) -> Tuple[Label, ...]:
        return state.labels

    def _link_parities(self, state: BasisState) -> Tuple[int, ...]:
        out = []
        for k, alpha in enumerate(state.links):
            A, B = self.link_ends(state, k)
            out.append(self.module.parity(A, alpha, B, state.homs[k]))
        return tuple(out)

    def link_parities(self, n: int) -> Tuple[int, ...]:
        if self._parities is None:
            return (0,) * self.spec.n_links
        return self._parities[n]

    def state_parity(self, n: int) -> int:
        return total_parity(self.link_parities(n))

    # -- bond geometry -----------------------------------------------------

    def bond_sites(self) -> List[int]:
        if self.is_ring:
            return list(range(self.spec.length))
        return list(range(1, self.spec.length))

    def _check_site(self, site: int) -> None:
        if site not in self.bond_sites():
            raise GeometryError(f"no bond at site {site} of a {self.spec.geometry} of length {self.spec.length}")

    def local(self, state: BasisState, site: int) -> LocalConfig:
        """Local view of ``state`` around ``site``.

        The closure bond sees the left neighbour shifted back through the
        twist so that link N-1 lands on A_0.
        """
        self._check_site(site)
        N = self.spec.length
        if self.is_ring and site == 0:
            last = state.labels[N - 1]
            left = self.twist.source[last] if self.twist.geometric else last
            return LocalConfig(left, state.links[N - 1], state.homs[N - 1], state.labels[0],
                               state.links[0], state.homs[0], state.labels[1])
        right = self.closure(state) if self.is_ring and site == N - 1 else state.labels[site + 1]
        return LocalConfig(state.labels[site - 1], state.links[site - 1], state.homs[site - 1],
                           state.labels[site], state.links[site], state.homs[site], right)

    def replace(self, state: BasisState, site: int, alpha: Label, va: int, center: Label,
                beta: Label, vb: int) -> Optional[int]:
        """Index of ``state`` with the bond data at ``site`` replaced, or None."""
        labels, links, homs = list(state.labels), list(state.links), list(state.homs)
        a = self.spec.length - 1 if (self.is_ring and site == 0) else site - 1
        labels[site] = center
        links[a], homs[a] = alpha, va
        links[site], homs[site] = beta, vb
        return self._index.get(BasisState(tuple(labels), tuple(links), tuple(homs)))

    # -- reporting ---------------------------------------------------------

    def report(self) -> CheckReport:
        errors = [] if self.states else [
            f"empty basis for {self.module.name} on {self.spec.geometry} N={self.spec.length}"
        ]
        return CheckReport(
            name=f"basis[{self.module.name}]", passed=bool(self.states), max_residual=0.0, tol=0.0,
            checked=len(self.states), errors=errors,
            details={"N": self.spec.length, "geometry": self.spec.geometry,
                     "twist": None if self.spec.twist is None else _encode(self.spec.twist),
                     "dim": len(self.states)},
        )


def resolve_twist(mod: ModuleCategory, twist: Optional[Label]) -> TwistData:
    """Classify a twist label as trivial, geometric (regular) or a character (vec)."""
    base: FusionCategory = mod.base
    if twist is None or twist == base.unit:
        return TwistData(label=twist)
    if twist in base.labels:
        if not base.is_invertible(twist):
            raise NotRealizableError(f"twist {twist!r} is not invertible in {base.name}")
        if mod.kind != "regular":
            raise NotRealizableError(
                f"object twists are realized on regular modules only, not on {mod.name}"
            )
        target, source = {}, {}
        for X in mod.ids:
            out = list(mod.act(X, twist))
            if len(out) != 1:
                raise NotRealizableError(f"{X!r} ◁ {twist!r} is not simple")
            target[X] = out[0]
            source[out[0]] = X
        return TwistData(label=twist, target=target, source=source)
    if mod.kind == "vec":
        chars = abelian_characters(base)
        if twist in chars:
            return TwistData(label=twist, character=chars[twist])
    raise LabelNotFoundError(f"twist {twist!r} is neither an object of {base.name} nor a character")


def sector_twist(spec: ChainSpec, t: Label, base: Optional[FusionCategory] = None) -> ChainSpec:
    """Copy of ``spec`` with the ring closed through the twist ``t``."""
    if spec.geometry != "ring":
        raise GeometryError("symmetry twists need ring geometry")
    if base is not None and t in base.labels and not base.is_invertible(t):
        raise NotRealizableError(f"twist {t!r} is not invertible in {base.name}")
    return dataclasses.replace(spec, twist=t)


def enumerate_basis(mod: ModuleCategory, spec: ChainSpec) -> ChainBasis:
    """All admissible labellings in lexicographic order of (A_0, (alpha, v, A) per link)."""
    base = mod.base
    for k in range(spec.n_links):
        if spec.strands is not None:
            base.require(*spec.strands[k])
    if spec.sites is not None:
        for allowed in spec.sites:
            mod.require(*allowed)
    if spec.boundary is not None:
        mod.require(*[x for x in spec.boundary if x is not None])
    twist = resolve_twist(mod, spec.twist)

    N = spec.length
    ring = spec.geometry == "ring"
    rank = {x: n for n, x in enumerate(mod.ids)}
    strands = [spec.allowed_strands(k, base.labels) for k in range(N)]
    allowed = [set(spec.allowed_labels(i, mod.ids)) for i in range(spec.n_labels)]
    cache: Dict[Tuple[Label, int], List[Tuple[Label, int, Label]]] = {}

    def moves(A: Label, k: int) -> List[Tuple[Label, int, Label]]:
        key = (A, k)
        if key not in cache:
            out = []
            for alpha in strands[k]:
                cands = [(v, rank[B], B) for B, n in mod.act(A, alpha).items() for v in range(n)]
                out.extend((alpha, v, B) for v, _, B in sorted(cands))
            cache[key] = out
        return cache[key]

    if ring:
        starts = [A for A in mod.ids if A in allowed[0]]
    else:
        left = spec.boundary[0] if spec.boundary else None
        starts = [A for A in mod.ids if A in allowed[0] and (left is None or A == left)]
    right_end = spec.boundary[1] if (spec.boundary and not ring) else None

    states: List[BasisState] = []
    labels: List[Label] = []
    links: List[Label] = []
    homs: List[int] = []

    def walk(k: int) -> None:
        A = labels[k]
        for alpha, v, B in moves(A, k):
            if k == N - 1:
                if ring:
                    closing = twist.target[labels[0]] if twist.geometric else labels[0]
                    if B != closing:
                        continue
                    states.append(BasisState(tuple(labels), tuple(links + [alpha]), tuple(homs + [v])))
                else:
                    if B not in allowed[N] or (right_end is not None and B != right_end):
                        continue
                    states.append(BasisState(tuple(labels + [B]), tuple(links + [alpha]), tuple(homs + [v])))
                continue
            if B not in allowed[k + 1]:
                continue
            labels.append(B)
            links.append(alpha)
            homs.append(v)
            walk(k + 1)
            labels.pop()
            links.pop()
            homs.pop()

    for A0 in starts:
        labels.append(A0)
        walk(0)
        labels.pop()

    basis = ChainBasis(mod, spec, states, twist)
    if not states:
        logger.warning(f"⚠️ empty basis: {mod.name} on {spec.geometry} N={N} twist={spec.twist!r}")
    else:
        logger.debug(f"🔧 enumerated {len(states)} states for {mod.name} ({spec.geometry}, N={N})")
    return basis


def state_index(basis: ChainBasis, state: BasisState) -> int:
    return basis.state_index(state)


def state_unindex(basis: ChainBasis, n: int) -> BasisState:
    return basis.unindex(n)
