"""Exact double-coset algebras of symmetric groups with respect to Young subgroups.

Coset matrices, brute-force permutation oracles, exact structure constants,
the deformation-ring universal algebra, braid-relation checks, two-block
hypergeometric closed forms, and the graded/Poisson degeneration.
"""

from .algebra import (
    AlgebraElement,
    AssociativityReport,
    TripleTensor,
    commutator,
    multiply,
    product_table,
    structure_constant,
    triple_tensors,
    verify_associativity,
)
from .braid import (
    BraidReport,
    RelationCheck,
    check_relations,
    commutator_witness,
    r_element,
    scaled_r_element,
)
from .cosets import (
    CosetMatrix,
    Margins,
    OffDiagonalType,
    coset_size,
    embed_offdiagonal,
    enumerate_coset_matrices,
    strip_diagonal,
)
from .epsring import EpsPolynomial, EpsRingElement, EpsSeries, bracket, expand, specialize
from .errors import (
    BruteForceLimitExceeded,
    CosetAlgError,
    HypergeometricParameterError,
    MarginOverflow,
    PoleAtSpecialization,
)
from .nu2 import f43_terminating, phi_matrix, s_closed_form, s_eq3, s_oracle, s_sum, universal_s
from .oracle import (
    GroupAlgebraVector,
    YoungPartition,
    classify,
    compose,
    convolve,
    coset_average,
    enumerate_coset,
    inverse,
    oracle_structure_constant,
    random_permutation,
    young_average,
)
from .poisson import (
    GradedElement,
    first_order_shift_formula,
    first_order_term,
    graded_multiply,
    poisson_bracket,
    poisson_bracket_via_ring,
)
from .universal import (
    ConstrainedTripleTensor,
    Lemma3Report,
    UniversalElement,
    candidate_outputs,
    enumerate_tensors,
    lemma3_checks,
    specialize_constant,
    universal_multiply,
    universal_product,
    universal_structure_constant,
)

__version__ = "0.1.0"
