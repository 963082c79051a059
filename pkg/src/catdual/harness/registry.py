"""
Model Registry

Named presets for the lattice models built by this package. A categorical
preset combines a fusion category, a module category, a chain template and
a list of bonds; a fermionic preset wraps a second-quantized chain from
``catdual.core.fermions``. Both build into a ``BuiltModel`` carrying the
Hamiltonian, the bond generators and the realized symmetry operators.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from ..core.chain_space import BasisState, ChainBasis, ChainSpec, enumerate_basis
from ..core.errors import LabelNotFoundError, ValidationError
from ..core.fermions import FermionModes, parity_operator, preset_fermion_hamiltonian
from ..core.fusion_core import (
    FusionCategory,
    Label,
    _decode,
    category_from_name,
    group_table,
    ising,
    ising_op_x_ising,
    rep_uq_sl2,
    svec,
    vec_g,
    vec_z2,
)
from ..core.module_data import (
    ModuleCategory,
    bimodule_over_double,
    builtin_module,
    double_fermion,
    ising_fermion,
    regular_module,
    svec_condense,
    vec_forgetful,
    vec_over_uqsl2,
)
from ..core.mpo_engine import symmetry_operators
from ..core.operators import (
    BondSpec,
    HamiltonianSpec,
    HamiltonianTerm,
    SparseOperator,
    bond_operators,
    build_hamiltonian,
    pauli_string,
)
from ..core.quantum_group import qnumber
from ..core.spectra import (
    SPECTRAL_TOL,
    DualityReport,
    SectorDecomposition,
    diagonalize,
    sector_decompose,
    verify_duality,
)

logger = logging.getLogger(__name__)

Params = Dict[str, float]


# ---------------------------------------------------------------------------
# Bonds
# ---------------------------------------------------------------------------

def z2_bonds(odd: Label = "m", unit: Label = "1") -> Dict[str, BondSpec]:
    """Transverse-field Ising bonds over Vec_Z2: b1 flips the centre, b2 weighs both links."""
    e, m = unit, odd
    b1 = BondSpec({
        (m, e, m, e, e, 0, 0): 1.0,
        (e, m, m, e, m, 0, 0): 1.0,
        (e, m, e, m, e, 0, 0): 1.0,
        (m, e, e, m, m, 0, 0): 1.0,
    }, name="b1")
    b2 = BondSpec({
        (e, e, e, e, e, 0, 0): 1.0,
        (m, m, m, m, e, 0, 0): -1.0,
    }, name="b2")
    return {"b1": b1, "b2": b2}


def clock_bonds(n: int) -> Dict[str, BondSpec]:
    """Z_n clock model bonds: b1 shifts the centre label by every h != 0, b2 is the cosine weight."""
    els = [str(k) for k in range(n)]
    b1, b2 = {}, {}
    for a in range(n):
        for b in range(n):
            g = (a + b) % n
            for h in range(1, n):
                b1[(els[a], els[(a + h) % n], els[b], els[(b - h) % n], els[g], 0, 0)] = 1.0
            w = (np.cos(2 * np.pi * a / n) + np.cos(2 * np.pi * b / n)) / 2
            if abs(w) > 1e-15:
                b2[(els[a], els[a], els[b], els[b], els[g], 0, 0)] = w
    return {"b1": BondSpec(b1, name="b1"), "b2": BondSpec(b2, name="b2")}


def ising_bond(base: FusionCategory, name: str = "b") -> BondSpec:
    """(sigma sigma -> 1) minus (sigma sigma -> psi) on two sigma strands."""
    return BondSpec.channel("sigma", "sigma", {"1": 1.0, "psi": -1.0}, base, name=name)


SIGMA_SIGMA = ("sigma", "sigma")

DOUBLE_TWISTS = [("1", "1"), ("psi", "1"), ("1", "psi"), ("psi", "psi")]


def double_weights() -> Dict[str, Dict[Tuple[Label, Label], float]]:
    """Channel weights of b1, b2, b3 on (sigma, sigma) ⊗ (sigma, sigma) with (1 ± psi) per factor."""
    plus = {"1": 1.0, "psi": 1.0}
    minus = {"1": 1.0, "psi": -1.0}

    def weights(left, right):
        return {(x, y): left[x] * right[y] for x in ("1", "psi") for y in ("1", "psi")}

    return {"b1": weights(plus, minus), "b2": weights(minus, plus), "b3": weights(minus, minus)}


def double_bonds(base: FusionCategory) -> Dict[str, BondSpec]:
    return {
        name: BondSpec.channel(SIGMA_SIGMA, SIGMA_SIGMA, w, base, name=name)
        for name, w in double_weights().items()
    }


def ring_invariants(bonds: Sequence[SparseOperator], names: Sequence[str] = ("b1", "b2")) -> Dict[str, SparseOperator]:
    """Products of one bond family over the even and over the odd sites of a ring.

    Neighbouring bonds of a family anticommute and the two families commute,
    so each product is central in the bond algebra. ``W_<name>`` is the
    product over every site.
    """
    out: Dict[str, SparseOperator] = {}
    for name in names:
        for parity, tag in ((0, "even"), (1, "odd")):
            W = SparseOperator.identity(bonds[0].dim)
            for b in bonds:
                family, site = b.label.split("@")
                if family == name and int(site) % 2 == parity:
                    W = W @ b
            W.label = f"W_{name}_{tag}"
            out[W.label] = W
        total = out[f"W_{name}_even"] @ out[f"W_{name}_odd"]
        total.label = f"W_{name}"
        out[total.label] = total
    return out


def temperley_lieb_bond(base: FusionCategory, q: float) -> BondSpec:
    """[2]_q times the projector of two spin-1/2 strands onto spin 0."""
    return BondSpec.channel("1/2", "1/2", {"0": qnumber(2, q)}, base, name="e")


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

@dataclass
class BuiltModel:
    """Everything a subcommand needs about one preset at one size and twist."""
    preset: str
    N: int
    params: Params
    twist: Any
    hamiltonian: SparseOperator
    category: Optional[FusionCategory] = None
    module: Optional[ModuleCategory] = None
    basis: Optional[ChainBasis] = None
    spec: Optional[HamiltonianSpec] = None
    bonds: List[SparseOperator] = field(default_factory=list)
    symmetries: Dict[str, SparseOperator] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    def metadata(self) -> Dict[str, Any]:
        return {
            "model": self.preset,
            "N": self.N,
            "geometry": None if self.basis is None else self.basis.spec.geometry,
            "twist": self.twist,
            "params": dict(self.params),
            "dim": self.dim,
        }


EffectiveBonds = Callable[[ModuleCategory, int, Params, str], Tuple[List[Tuple[SparseOperator, float]], SparseOperator]]


@dataclass
class ModelPreset:
    """A named model; ``local_form`` documents the explicit spin or fermion Hamiltonian.

    ``seam`` replaces ``terms`` for presets whose twists are sign defects in
    the bonds rather than a label on the chain. ``effective`` builds fermion
    chains directly from the super F◁ blocks of a condensed module and
    returns the weighted bonds with the fermion parity. An oracle in
    "spectrum" mode is compared eigenvalue by eigenvalue over all twists.
    """
    name: str
    local_form: str
    defaults: Params
    category: Optional[Callable[[Params], FusionCategory]] = None
    module: Optional[Callable[[FusionCategory], ModuleCategory]] = None
    chain: Optional[Callable[[int, Params], ChainSpec]] = None
    terms: Optional[Callable[[FusionCategory, Params], List[HamiltonianTerm]]] = None
    seam: Optional[Callable[[FusionCategory, Params, int, Any], List[HamiltonianTerm]]] = None
    invariants: Optional[Callable[[Sequence[SparseOperator]], Dict[str, SparseOperator]]] = None
    effective: Optional[EffectiveBonds] = None
    twists: Optional[Callable[[Params], List[Any]]] = None
    fermion: Optional[str] = None
    qubit_index: Optional[Callable[[BasisState], int]] = None
    pauli_form: Optional[Callable[..., SparseOperator]] = None
    oracle_mode: str = "matrix"
    min_length: int = 2
    even_length: bool = False

    def resolve(self, params: Optional[Dict[str, Any]] = None) -> Params:
        out = dict(self.defaults)
        for k, v in (params or {}).items():
            if v is not None:
                out[k] = v
        return out

    def twist_labels(self, params: Optional[Params] = None) -> List[Any]:
        return [None] if self.twists is None else self.twists(self.resolve(params))

    def _check_length(self, N: int) -> None:
        if N < self.min_length:
            raise ValidationError(f"{self.name} needs N >= {self.min_length}, got {N}")
        if self.even_length and N % 2:
            raise ValidationError(f"{self.name} needs an even number of sites, got {N}")

    def build(self, N: int, params: Optional[Dict[str, Any]] = None, twist: Any = None,
              with_symmetries: bool = True) -> BuiltModel:
        self._check_length(N)
        p = self.resolve(params)
        twist = _decode(twist)
        if self.fermion is not None:
            return self._build_fermion(N, p, twist)
        if self.effective is not None:
            return self._build_effective(N, p, twist)
        cat = self.category(p)
        mod = self.module(cat)
        chain = self.chain(N, p)
        if self.seam is not None:
            twist = twist if twist is not None else self.twist_labels(p)[0]
            terms = self.seam(cat, p, N, twist)
        else:
            terms = self.terms(cat, p)
            if twist is not None:
                chain = ChainSpec(length=chain.length, geometry=chain.geometry, strands=chain.strands,
                                  twist=twist, boundary=chain.boundary, sites=chain.sites)
        basis = enumerate_basis(mod, chain)
        spec = HamiltonianSpec(terms=terms, chain=chain, name=self.name)
        H = build_hamiltonian(spec, mod, basis)
        bonds: List[SparseOperator] = []
        for term in spec.terms:
            bonds.extend(bond_operators(mod, basis, term.bond, term.sites))
        syms: Dict[str, SparseOperator] = {}
        if with_symmetries:
            syms = self.invariants(bonds) if self.invariants is not None else symmetry_operators(mod, basis)
        logger.info(f"✅ built {self.name}: N={N}, twist={twist!r}, D={basis.dim}, {len(syms)} symmetries")
        return BuiltModel(self.name, N, p, twist, H, cat, mod, basis, spec, bonds, syms)

    def _build_fermion(self, N: int, p: Params, twist: Any) -> BuiltModel:
        bc = twist or "periodic"
        H = preset_fermion_hamiltonian(self.fermion, N, {**p, "bc": bc})
        H.label = self.name
        return BuiltModel(self.name, N, p, bc, H, symmetries={"U_chi1": parity_operator(N)})

    def _build_effective(self, N: int, p: Params, twist: Any) -> BuiltModel:
        bc = twist or "periodic"
        cat = self.category(p)
        mod = self.module(cat)
        weighted, parity = self.effective(mod, N, p, bc)
        H = SparseOperator.zeros(parity.dim, label=self.name)
        for bond, J in weighted:
            H = H + bond * J
        H.label = self.name
        bonds = [bond for bond, _ in weighted]
        logger.info(f"✅ built {self.name}: N={N}, bc={bc}, D={H.dim}, {len(bonds)} bonds from super F◁ blocks")
        return BuiltModel(self.name, N, p, bc, H, cat, mod, bonds=bonds, symmetries={"U_chi1": parity})

    def oracle(self, N: int, params: Optional[Dict[str, Any]] = None, twist: Any = None) -> Optional[SparseOperator]:
        if self.pauli_form is None:
            return None
        p = self.resolve(params)
        return self.pauli_form(N, p) if twist is None else self.pauli_form(N, p, twist)


# -- chain templates ------------------------------------------------------

def _ring(strands: Optional[Sequence[Label]] = None):
    def make(N: int, p: Params) -> ChainSpec:
        return ChainSpec.uniform(N, None if strands is None else list(strands), geometry="ring")
    return make


def _branch_ring(even: List[Label], odd: List[Label], strand: Label):
    def make(N: int, p: Params) -> ChainSpec:
        sites = [list(even) if i % 2 == 0 else list(odd) for i in range(N)]
        return ChainSpec.uniform(N, [strand], geometry="ring", sites=sites)
    return make


def _uniform_sites(allowed: List[Label], strand: Label):
    def make(N: int, p: Params) -> ChainSpec:
        return ChainSpec.uniform(N, [strand], geometry="ring", sites=[list(allowed) for _ in range(N)])
    return make


def _open_spin_half(boundary=None):
    def make(N: int, p: Params) -> ChainSpec:
        return ChainSpec.uniform(N, ["1/2"], geometry="open", boundary=boundary)
    return make


# -- term templates -------------------------------------------------------

def _tfim_terms(odd: Label):
    def make(cat: FusionCategory, p: Params) -> List[HamiltonianTerm]:
        b = z2_bonds(odd)
        return [HamiltonianTerm(-p["J"], b["b1"]), HamiltonianTerm(-p["J"] * p["g"], b["b2"])]
    return make


def _anyon_terms(cat: FusionCategory, p: Params) -> List[HamiltonianTerm]:
    return [HamiltonianTerm(-p["J"], ising_bond(cat))]


def _double_seam(f1: int, f2: int):
    """-J b1 - J b2 + J g b3 site by site with the twist (x, y) as sign defects.

    x = psi negates the first factor at site f1 (b2 and b3 change sign),
    y = psi negates the second factor at site f2 (b1 and b3 change sign).
    """
    def make(cat: FusionCategory, p: Params, N: int, twist: Any) -> List[HamiltonianTerm]:
        if tuple(twist) not in DOUBLE_TWISTS:
            raise ValidationError(f"twist must be one of {DOUBLE_TWISTS}, got {twist!r}")
        x, y = twist
        b = double_bonds(cat)
        terms = []
        for s in range(N):
            e1 = -1.0 if x == "psi" and s == f1 else 1.0
            e2 = -1.0 if y == "psi" and s == f2 else 1.0
            terms += [
                HamiltonianTerm(-p["J"], b["b1"].scaled(e2), [s]),
                HamiltonianTerm(-p["J"], b["b2"].scaled(e1), [s]),
                HamiltonianTerm(p["J"] * p["g"], b["b3"].scaled(e1 * e2), [s]),
            ]
        return terms
    return make


# -- fermion chains on super F◁ blocks --------------------------------------

def _wrapped(modes: FermionModes, left: int, right: int) -> float:
    return modes.wrap_sign if right < left else 1.0


def _ising_fermion_bonds(mod: ModuleCategory, N: int, p: Params, bc: str):
    """One bond per site on both sublattice sectors of the beta chain.

    In the sector with beta on sites of parity ``offset`` each beta carries
    one mode; a bond centred on beta weighs its occupation and a bond centred
    on 1 acts on the modes of the two neighbouring beta.
    """
    view = mod.condensed
    w = {"1": 1.0, "psi": -1.0}
    on_beta = view.block("1", "sigma", "sigma", "1").bond(w)
    between = view.block("beta", "sigma", "sigma", "beta").bond(w)
    modes = FermionModes(N // 2, bc)
    weighted = []
    for s in range(N):
        blocks = []
        for offset in (0, 1):
            if s % 2 == offset:
                blocks.append(modes.embed(on_beta, [(s - offset) // 2]))
            else:
                left, right = ((s - 1 - offset) % N) // 2, ((s + 1 - offset) % N) // 2
                blocks.append(modes.embed(between, [left, right], _wrapped(modes, left, right)))
        weighted.append((SparseOperator(sp.block_diag(blocks, format="csr"), label=f"b@{s}"), -p["J"]))
    P = parity_operator(N // 2).matrix
    return weighted, SparseOperator(sp.block_diag([P, P], format="csr"), label="(-1)^F")


def _xxz_fermion_bonds(mod: ModuleCategory, N: int, p: Params, bc: str):
    """b1, b2, b3 at site s act on the modes of links s - 1 and s."""
    block = mod.condensed.block("1", SIGMA_SIGMA, SIGMA_SIGMA, "1")
    local = {name: block.bond(w) for name, w in double_weights().items()}
    coupling = {"b1": -p["J"], "b2": -p["J"], "b3": p["J"] * p["g"]}
    modes = FermionModes(N, bc)
    weighted = []
    for s in range(N):
        left, right = (s - 1) % N, s
        for name in ("b1", "b2", "b3"):
            op = modes.embed(local[name], [left, right], _wrapped(modes, left, right))
            weighted.append((SparseOperator(op, label=f"{name}@{s}"), coupling[name]))
    return weighted, parity_operator(N)


def _tl_terms(cat: FusionCategory, p: Params) -> List[HamiltonianTerm]:
    return [HamiltonianTerm(p["J"], temperley_lieb_bond(cat, p["q"]))]


def _clock_terms(cat: FusionCategory, p: Params) -> List[HamiltonianTerm]:
    b = clock_bonds(int(p["n"]))
    return [HamiltonianTerm(-p["J"], b["b2"]), HamiltonianTerm(-p["J"] * p["g"], b["b1"])]


# -- explicit forms -------------------------------------------------------

def _label_bits(odd: Label):
    def index(state: BasisState) -> int:
        return int("".join("1" if a == odd else "0" for a in state.labels), 2)
    return index


def _link_bits(odd: Label):
    def index(state: BasisState) -> int:
        return int("".join("1" if a == odd else "0" for a in state.links), 2)
    return index


def _hom_bits(state: BasisState) -> int:
    return int("".join(str(v) for v in state.homs), 2)


def _pauli_sum(N: int, terms: List[tuple]) -> SparseOperator:
    H = SparseOperator.zeros(2 ** N)
    for coeff, ops in terms:
        H = H + pauli_string(N, ops, coeff)
    return H


def tfim_pauli(N: int, p: Params) -> SparseOperator:
    """-J sum X_i - J g sum Z_i Z_{i+1} on a ring."""
    J, g = p["J"], p["g"]
    terms = [(-J, {i: "X"}) for i in range(N)]
    terms += [(-J * g, {i: "Z", (i + 1) % N: "Z"}) for i in range(N)]
    return _pauli_sum(N, terms)


def kw_pauli(N: int, p: Params) -> SparseOperator:
    """-J sum X_k X_{k+1} - J g sum Z_k on a ring of links."""
    J, g = p["J"], p["g"]
    terms = [(-J, {k: "X", (k + 1) % N: "X"}) for k in range(N)]
    terms += [(-J * g, {k: "Z"}) for k in range(N)]
    return _pauli_sum(N, terms)


def jw_pauli(N: int, p: Params) -> SparseOperator:
    """The svec chain in the occupation basis, c_N = c_0."""
    return preset_fermion_hamiltonian("jw_ising", N, {"J": p["J"], "g": p["g"], "bc": "periodic"})


def six_vertex_pauli(N: int, p: Params) -> SparseOperator:
    """-(J/2) sum (XX + YY + ZZ - 1) on an open chain; valid at q = 1."""
    J = p["J"]
    terms = []
    for i in range(N - 1):
        for s in "XYZ":
            terms.append((-J / 2, {i: s, i + 1: s}))
    H = _pauli_sum(N, terms)
    return H + SparseOperator.identity(2 ** N) * (J / 2 * (N - 1))


def anyon_pauli(N: int, p: Params) -> SparseOperator:
    """Two decoupled critical transverse-field Ising rings of N / 2 sites."""
    ring = tfim_pauli(N // 2, {"J": p["J"], "g": 1.0}).matrix
    return SparseOperator(sp.block_diag([ring, ring], format="csr"))


def _two_chain_pauli(first: Callable[[int, int], Dict[int, str]], second: Callable[[int, int], Dict[int, str]],
                     f1: int, f2: int):
    """sum_s [-J (e1 t_s + e2 u_s) + J g e1 e2 t_s u_s] for Pauli strings t_s, u_s.

    e1 = -1 at site f1 when the first twist component is psi, e2 = -1 at f2
    for the second one.
    """
    def form(N: int, p: Params, twist: Any = ("1", "1")) -> SparseOperator:
        x, y = twist
        J, g = p["J"], p["g"]
        H = SparseOperator.zeros(2 ** N)
        for s in range(N):
            e1 = -1.0 if x == "psi" and s == f1 else 1.0
            e2 = -1.0 if y == "psi" and s == f2 else 1.0
            t, u = pauli_string(N, first(N, s)), pauli_string(N, second(N, s))
            H = H + t * (-J * e1) + u * (-J * e2) + (t @ u) * (J * g * e1 * e2)
        return H
    return form


def _first_copy_ci1(N: int, s: int) -> Dict[int, str]:
    L, k = N // 2, s // 2
    return {k: "X"} if s % 2 == 0 else {k: "Z", (k + 1) % L: "Z"}


def _first_copy_ci2(N: int, s: int) -> Dict[int, str]:
    L, k = N // 2, s // 2
    return {(k - 1) % L: "Z", k: "Z"} if s % 2 == 0 else {k: "X"}


def _second_copy(N: int, s: int) -> Dict[int, str]:
    L, k = N // 2, s // 2
    return {L + (k - 1) % L: "Z", L + k: "Z"} if s % 2 == 0 else {L + k: "X"}


coupled_ising_1_pauli = _two_chain_pauli(_first_copy_ci1, _second_copy, f1=1, f2=0)

coupled_ising_2_pauli = _two_chain_pauli(_first_copy_ci2, _second_copy, f1=0, f2=0)

xxz_pauli = _two_chain_pauli(
    lambda N, s: {(s - 1) % N: "Z", s: "X"},
    lambda N, s: {(s - 1) % N: "X", s: "Z"},
    f1=0, f2=0,
)

xxz_nnn_pauli = _two_chain_pauli(
    lambda N, s: {(s - 1) % N: "Z", s: "X"},
    lambda N, s: {s: "X", (s + 1) % N: "Z"},
    f1=0, f2=1,
)


# -- registry -------------------------------------------------------------

def _z_n(p: Params) -> FusionCategory:
    n = int(p["n"])
    return vec_g(group_table(f"Z{n}"), name=f"vec_g:Z{n}")


@lru_cache(maxsize=None)
def _rep(q: float, jmax: float) -> FusionCategory:
    return rep_uq_sl2(q, jmax)


_PRESETS: List[ModelPreset] = [
    ModelPreset(
        name="tfim",
        local_form="H = -J sum_i X_i - J g sum_i Z_i Z_{i+1} (transverse-field Ising, regular Vec_Z2 module)",
        defaults={"J": 1.0, "g": 1.0},
        category=lambda p: vec_z2(), module=regular_module, chain=_ring(),
        terms=_tfim_terms("m"), twists=lambda p: ["1", "m"],
        qubit_index=_label_bits("m"), pauli_form=tfim_pauli,
    ),
    ModelPreset(
        name="tfim_kw",
        local_form="H = -J sum_k X_k X_{k+1} - J g sum_k Z_k (Kramers-Wannier dual, Vec module of Vec_Z2)",
        defaults={"J": 1.0, "g": 1.0},
        category=lambda p: vec_z2(), module=vec_forgetful, chain=_ring(),
        terms=_tfim_terms("m"), twists=lambda p: ["chi0", "chi1"],
        qubit_index=_link_bits("m"), pauli_form=kw_pauli,
    ),
    ModelPreset(
        name="tfim_jw",
        local_form="H = -J sum (c†_k c_{k+1} + c†_k c†_{k+1} + h.c.) + J g sum (2 n_k - 1) (Jordan-Wigner dual, sVec module)",
        defaults={"J": 1.0, "g": 1.0},
        category=lambda p: svec(), module=lambda cat: svec_condense(cat), chain=_ring(),
        terms=_tfim_terms("psi"), twists=lambda p: ["chi0", "chi1"],
        qubit_index=_link_bits("psi"), pauli_form=jw_pauli,
    ),
    ModelPreset(
        name="jw_ising",
        local_form="Same fermion chain as tfim_jw written directly in second quantization; twists are boundary conditions",
        defaults={"J": 1.0, "g": 1.0},
        fermion="jw_ising", twists=lambda p: ["periodic", "antiperiodic"],
    ),
    ModelPreset(
        name="ising_anyonchain",
        local_form="H = -J sum_i (P^1_i - P^psi_i) on sigma strands of the regular Ising module; two copies of the critical TFIM",
        defaults={"J": 1.0},
        category=lambda p: ising(), module=regular_module, chain=_ring(["sigma"]),
        terms=_anyon_terms, even_length=True,
        pauli_form=anyon_pauli, oracle_mode="spectrum",
    ),
    ModelPreset(
        name="ising_fermion",
        local_form="H = -J sum_s b_s on Ising/<psi = 1>: b = 1 - 2n on beta, i eta_L xi_R between two beta; "
                   "two sublattice copies of the critical Majorana chain",
        defaults={"J": 1.0},
        category=lambda p: ising(), module=lambda cat: ising_fermion(),
        effective=_ising_fermion_bonds, twists=lambda p: ["periodic", "antiperiodic"],
        min_length=4, even_length=True,
    ),
    ModelPreset(
        name="coupled_ising_1",
        local_form="H = -J b1 - J b2 + J g b3 on the regular Ising^op x Ising module, branch (1|psi, sigma)/(sigma, 1|psi)",
        defaults={"J": 1.0, "g": 1.0},
        category=lambda p: ising_op_x_ising(), module=regular_module,
        chain=_branch_ring([("1", "sigma"), ("psi", "sigma")], [("sigma", "1"), ("sigma", "psi")],
                           ("sigma", "sigma")),
        seam=_double_seam(1, 0), invariants=ring_invariants, twists=lambda p: list(DOUBLE_TWISTS),
        pauli_form=coupled_ising_1_pauli, oracle_mode="spectrum", min_length=4, even_length=True,
    ),
    ModelPreset(
        name="coupled_ising_2",
        local_form="Same bonds, branch (sigma, sigma)/(1|psi, 1|psi)",
        defaults={"J": 1.0, "g": 1.0},
        category=lambda p: ising_op_x_ising(), module=regular_module,
        chain=_branch_ring([("sigma", "sigma")],
                           [("1", "1"), ("1", "psi"), ("psi", "1"), ("psi", "psi")], ("sigma", "sigma")),
        seam=_double_seam(0, 0), invariants=ring_invariants, twists=lambda p: list(DOUBLE_TWISTS),
        pauli_form=coupled_ising_2_pauli, oracle_mode="spectrum", min_length=4, even_length=True,
    ),
    ModelPreset(
        name="xxz",
        local_form="H = -J sum (Z_{s-1} X_s + X_{s-1} Z_s) + J g sum Y_{s-1} Y_s: the double bonds on Ising "
                   "as an Ising^op x Ising module, sigma sites",
        defaults={"J": 1.0, "g": 1.0},
        category=lambda p: ising_op_x_ising(), module=lambda cat: bimodule_over_double(ising(), cat),
        chain=_uniform_sites(["sigma"], ("sigma", "sigma")),
        seam=_double_seam(0, 0), invariants=ring_invariants, twists=lambda p: list(DOUBLE_TWISTS),
        pauli_form=xxz_pauli, oracle_mode="spectrum", min_length=4, even_length=True,
    ),
    ModelPreset(
        name="xxz_nnn",
        local_form="H = -J sum (Z_{s-1} X_s + X_s Z_{s+1}) + J g sum Z_{s-1} Z_{s+1}: the double bonds on Ising "
                   "as an Ising^op x Ising module, 1|psi sites",
        defaults={"J": 1.0, "g": 1.0},
        category=lambda p: ising_op_x_ising(), module=lambda cat: bimodule_over_double(ising(), cat),
        chain=_uniform_sites(["1", "psi"], ("sigma", "sigma")),
        seam=_double_seam(0, 1), invariants=ring_invariants, twists=lambda p: list(DOUBLE_TWISTS),
        pauli_form=xxz_nnn_pauli, oracle_mode="spectrum", min_length=4, even_length=True,
    ),
    ModelPreset(
        name="xxz_jw_h1",
        local_form="H = -J sum (2 c†_i c_{i+1} + h.c.) - J g sum (2n_i - 1)(2n_{i+1} - 1)",
        defaults={"J": 1.0, "g": 1.0},
        fermion="jw_xxz_h1", twists=lambda p: ["periodic", "antiperiodic"],
    ),
    ModelPreset(
        name="xxz_jw_h2",
        local_form="H = -J sum (2 c†_i c_{i+1} + h.c.) "
                   "+ J g sum [c†_i (1 - 2n_{i+1}) (c_{i+2} + e_{i+1} c†_{i+2}) + h.c.], e = +1 on odd i+1, -1 on even",
        defaults={"J": 1.0, "g": 1.0},
        fermion="jw_xxz_h2", twists=lambda p: ["periodic", "antiperiodic"], even_length=True,
    ),
    ModelPreset(
        name="xxz_fermion",
        local_form="H = -J b1 - J b2 + J g b3 from the super F◁ block of Ising/<psi = 1> over Ising^op x Ising; "
                   "one mode per link",
        defaults={"J": 1.0, "g": 1.0},
        category=lambda p: ising_op_x_ising(), module=lambda cat: double_fermion(),
        effective=_xxz_fermion_bonds, twists=lambda p: ["periodic", "antiperiodic"],
    ),
    ModelPreset(
        name="irf",
        local_form="H = J sum_i e_i with e_i = [2]_q P^0_i; heights in Rep(U_q(sl2)) starting at 0 (open chain)",
        defaults={"J": 1.0, "q": 1.0, "jmax": 3.0},
        category=lambda p: _rep(float(p["q"]), float(p["jmax"])), module=regular_module,
        chain=_open_spin_half(("0", None)), terms=_tl_terms, min_length=1,
    ),
    ModelPreset(
        name="six_vertex",
        local_form="H = J sum_i e_i on spin 1/2 sites; equals -(J/2) sum (XX + YY + ZZ - 1) at q = 1",
        defaults={"J": 1.0, "q": 1.0, "jmax": 3.0},
        category=lambda p: _rep(float(p["q"]), float(p["jmax"])), module=vec_over_uqsl2,
        chain=_open_spin_half(), terms=_tl_terms, min_length=1,
        qubit_index=_hom_bits,
        pauli_form=lambda N, p: six_vertex_pauli(N, p) if abs(p["q"] - 1.0) < 1e-14 else None,
    ),
    ModelPreset(
        name="gauge_zN",
        local_form="H = -J sum cos(2 pi (A_{i+1} - A_i) / n) - J g sum_i sum_{h != 0} X^h_i (Z_n clock model)",
        defaults={"J": 1.0, "g": 1.0, "n": 3},
        category=_z_n, module=regular_module, chain=_ring(), terms=_clock_terms,
        twists=lambda p: [str(k) for k in range(int(p["n"]))],
    ),
    ModelPreset(
        name="gauge_zN_vec",
        local_form="Gauged Z_n clock model on the Vec module of Vec_{Z_n}",
        defaults={"J": 1.0, "g": 1.0, "n": 3},
        category=_z_n, module=vec_forgetful, chain=_ring(), terms=_clock_terms,
        twists=lambda p: [f"chi{k}" for k in range(int(p["n"]))],
    ),
]

_BY_NAME = {p.name: p for p in _PRESETS}


@dataclass(frozen=True)
class DualPairing:
    """How the sectors of two dual presets are matched.

    ``keys`` restrict the symmetries each side is decomposed by; ``hint``
    maps sector labels of the first preset to labels of the second.
    """
    hint: Optional[Dict[str, str]] = None
    by_charges: bool = False
    embed: bool = False
    keys: Tuple[Optional[Tuple[str, ...]], Optional[Tuple[str, ...]]] = (None, None)

    def reversed(self) -> "DualPairing":
        hint = None if self.hint is None else {v: k for k, v in self.hint.items()}
        return DualPairing(hint, self.by_charges, self.embed, (self.keys[1], self.keys[0]))


RING_CHARGES = ("W_b1_even", "W_b1_odd", "W_b2_even", "W_b2_odd")

DUAL_PAIRS: Dict[Tuple[str, str], DualPairing] = {
    ("tfim", "tfim_kw"): DualPairing(hint={
        "twist=1;U_m=+1.000000": "twist=chi0;U_chi1=+1.000000",
        "twist=1;U_m=-1.000000": "twist=chi1;U_chi1=+1.000000",
        "twist=m;U_m=+1.000000": "twist=chi0;U_chi1=-1.000000",
        "twist=m;U_m=-1.000000": "twist=chi1;U_chi1=-1.000000",
    }),
    ("xxz", "coupled_ising_1"): DualPairing(by_charges=True, keys=(RING_CHARGES, RING_CHARGES)),
    ("xxz_nnn", "coupled_ising_2"): DualPairing(by_charges=True, keys=(RING_CHARGES, RING_CHARGES)),
    ("xxz", "xxz_jw_h1"): DualPairing(embed=True, keys=(("W_b2",), None)),
    ("xxz_nnn", "xxz_jw_h2"): DualPairing(embed=True, keys=(("W_b2",), None)),
}


def registry() -> List[ModelPreset]:
    return list(_PRESETS)


def get_preset(name: str) -> ModelPreset:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise LabelNotFoundError(f"unknown model {name!r}; available: {', '.join(_BY_NAME)}") from None


def build_model(name: str, N: int, params: Optional[Dict[str, Any]] = None, twist: Any = None) -> BuiltModel:
    return get_preset(name).build(N, params, twist)


def build_inline(category: str, module: str, hamiltonian: Dict[str, Any], name: str = "inline") -> BuiltModel:
    """Build a Hamiltonian from a JSON block (chain + bond rows) on a named category and module."""
    cat = category_from_name(category)
    mod = builtin_module(module or "regular", cat)
    spec = HamiltonianSpec.from_dict({**hamiltonian, "name": hamiltonian.get("name", name)})
    basis = enumerate_basis(mod, spec.chain)
    H = build_hamiltonian(spec, mod, basis)
    bonds: List[SparseOperator] = []
    for term in spec.terms:
        bonds.extend(bond_operators(mod, basis, term.bond, term.sites))
    return BuiltModel(name, spec.chain.length, {}, spec.chain.twist, H, cat, mod, basis, spec, bonds,
                      symmetry_operators(mod, basis))


def sector_family(name: str, N: int, params: Optional[Dict[str, Any]] = None,
                  tol: float = 1e-10, keys: Optional[Sequence[str]] = None) -> SectorDecomposition:
    """Sector decomposition over every twist the preset declares.

    ``keys`` selects the symmetries to decompose by (default: all of them).
    """
    preset = get_preset(name)
    parts = []
    for t in preset.twist_labels(params):
        model = preset.build(N, params, t)
        syms = model.symmetries
        if keys is not None:
            missing = [k for k in keys if k not in syms]
            if missing:
                raise LabelNotFoundError(f"{name} realizes no symmetry {missing}; available: {', '.join(syms)}")
            syms = {k: syms[k] for k in keys}
        parts.append(sector_decompose(model.hamiltonian, syms, tol=tol, twist=t))
    return SectorDecomposition.merge(parts)


def dual_pairing(a: str, b: str) -> DualPairing:
    if (a, b) in DUAL_PAIRS:
        return DUAL_PAIRS[(a, b)]
    if (b, a) in DUAL_PAIRS:
        return DUAL_PAIRS[(b, a)].reversed()
    return DualPairing()


def verify_pair(a: str, b: str, N: int, params: Optional[Dict[str, Any]] = None, tol: float = 1e-10,
                spectral_tol: float = SPECTRAL_TOL) -> DualityReport:
    """Compare the sector families of two presets under their registered pairing."""
    pairing = dual_pairing(a, b)
    fam_a = sector_family(a, N, params, tol, keys=pairing.keys[0])
    fam_b = sector_family(b, N, params, tol, keys=pairing.keys[1])
    return verify_duality(fam_a, fam_b, pairing.hint, spectral_tol, names=(a, b),
                          by_charges=pairing.by_charges, embed=pairing.embed)


def family_spectrum(name: str, N: int, params: Optional[Dict[str, Any]] = None) -> np.ndarray:
    """Eigenvalues of every twist of a preset, concatenated."""
    preset = get_preset(name)
    return np.concatenate([
        diagonalize(preset.build(N, params, t, with_symmetries=False).hamiltonian).eigenvalues
        for t in preset.twist_labels(params)
    ])


def oracle_spectrum(name: str, N: int, params: Optional[Dict[str, Any]] = None) -> Optional[np.ndarray]:
    """Eigenvalues of a spectrum-mode explicit form over every twist; None otherwise."""
    preset = get_preset(name)
    if preset.pauli_form is None or preset.oracle_mode != "spectrum":
        return None
    parts = []
    for t in preset.twist_labels(params):
        H = preset.oracle(N, params, t)
        if H is None:
            return None
        parts.append(diagonalize(H).eigenvalues)
    return np.concatenate(parts)


def family_bonds(name: str, N: int, params: Optional[Dict[str, Any]] = None) -> List[SparseOperator]:
    """Bond generators acting on the direct sum of every twist sector of a preset.

    A single ring realizes the bond algebra only up to its global relations
    (the product of all flip bonds is a symmetry on one ring and the identity
    on its dual); the sum over twists is faithful on both sides.
    """
    preset = get_preset(name)
    if preset.fermion is not None:
        raise ValidationError(f"{name} is a fermion chain without bond generators")
    models = [preset.build(N, params, t, with_symmetries=False) for t in preset.twist_labels(params)]
    counts = {len(m.bonds) for m in models}
    if len(counts) != 1:
        raise ValidationError(f"{name}: twist sectors carry different numbers of bonds {sorted(counts)}")
    out = []
    for k in range(counts.pop()):
        blocks = [m.bonds[k].matrix for m in models]
        out.append(SparseOperator(sp.block_diag(blocks, format="csr"), label=models[0].bonds[k].label))
    logger.debug(f"🔧 {name}: {len(out)} bonds over {len(models)} twist sectors, D={out[0].dim if out else 0}")
    return out


def qubit_permutation(model: BuiltModel, preset: ModelPreset) -> Optional[SparseOperator]:
    """Permutation from the chain basis to the computational basis of the explicit form."""
    if preset.qubit_index is None or model.basis is None:
        return None
    rows = [preset.qubit_index(s) for s in model.basis.states]
    return SparseOperator.from_triplets(model.dim, rows, list(range(model.dim)), [1.0] * model.dim)
