"""Exact-arithmetic Poisson-commutative subalgebras from involutions of
classical Lie algebras: construction, invariants, wedge identities, chains,
and pencils of skew forms.
"""

from .exactalg import Mat, Rat, pfaffian, rank_kernel, sub_pfaffian_vector
from .polyring import Poly, bihom_decompose, evaluate_and_differential, restrict
from .liealg import (
    Algebra,
    DEFAULT_PAIRS,
    PairSpec,
    SymmetricPair,
    build_algebra,
    build_chain_pairs,
    build_symmetric_pair,
    centralizer,
    parse_pair_key,
    sampled_algebra_index,
    sampled_index,
)
from .brackets import (
    INFINITY,
    jacobi_compatibility_check,
    phi_s_map,
    poisson_bracket_poly,
    restricted_rank_condition,
    structure_constants_t,
    tensor_at,
)
from .invariants import (
    InvariantSet,
    basic_invariants,
    ggs_check,
    r0_onto_check,
    sigma_normalize,
)
from .zconstruct import (
    GeneratorFamily,
    VerificationReport,
    cartan_subspace,
    chain_maximal_pc,
    lemma_sum_reg_verify,
    manakov_restrict,
    mf_generators,
    verify_commutativity,
    verify_trdeg_freeness,
    z_generators,
    z_infty_generators,
    ztilde_generators,
)
from .identities import (
    WedgeEval,
    det_ad_factor_check,
    kostant_identity_at,
    kostant_identity_suite,
    q_factor_check,
)
from .pencil import (
    Pencil,
    bound_and_sumdim_check,
    direct_sum,
    generic_rank_and_L,
    jk_summary,
    jordan_block,
    kronecker_block,
    orthogonality_check,
    random_congruence,
    read_pencil_file,
    singular_members,
)

__version__ = "0.1.0"
