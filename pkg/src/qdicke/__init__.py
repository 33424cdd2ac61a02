"""Construction, analysis and circuit preparation of q-deformed qudit Dicke states."""
from .qcomb import (
    DeformationParam,
    LaurentPoly,
    identity_word,
    inversion_number,
    max_inversion,
    multiset_permutations,
    q_bracket,
    q_bracket_poly,
    q_multinomial_log,
    q_multinomial_poly,
    reverse_composition,
    verify_inversion_identity,
)
from .states import (
    StateVector,
    amplitude,
    dicke_operator,
    dicke_recursive,
    dicke_sum,
    dual_transform,
    inner_product,
)
from .entanglement import (
    entanglement_entropy,
    entropy_bruteforce,
    entropy_curve,
    enumerate_cuts,
    schmidt_coefficient,
    schmidt_reconstruct,
    verify_q_vandermonde,
)
from .circuits import (
    build_U,
    build_pruned_U,
    export_qasm,
    gate_count,
    parse_qasm,
    prepare_and_verify,
    simulate,
)

__version__ = "0.1.0"
