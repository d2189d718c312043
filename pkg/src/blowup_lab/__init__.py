"""blowup-lab: graph generators and homomorphism-density experiments for triangle blowups."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    CauchySchwarzReport,
    TripartiteCountReport,
    PackingReport,
    ScanReport,
    ScanRow,
    alon_lower_bound,
    best_lower_bound,
    cauchy_schwarz_check,
    compare_lower_bounds,
    tripartite_count_experiment,
    nikiforov_lower_bound,
    packing_count_experiment,
    scan_t,
    trivial_bounds,
)
from .constructions import (
    ApFreeSet,
    RsCertificate,
    behrend_set,
    is_3ap_free,
    k112_extremal_graph,
    max_3ap_free_bruteforce,
    read_apfree,
    read_certificate,
    rs_graph,
    verify_rs_certificate,
    write_apfree,
    write_certificate,
)
from .counting import (
    BlowupWitness,
    DensityEstimate,
    HomCount,
    WitnessSearch,
    blowup_hom_count,
    cross_blowup_hom_count,
    cross_triangle_count,
    edge_triangle_multiplicities,
    find_blowup_witness,
    hom_count_bruteforce,
    k112_hom_count,
    list_triangles,
    sample_cross_blowup_density,
    sample_hom_density,
    triangle_hom_count,
)
from .errors import (
    BlowupLabError,
    DomainError,
    GraphFormatError,
    MalformedInputError,
    PreconditionError,
    ResourceBudgetError,
)
from .graph import (
    BlowupShape,
    Graph,
    VertexPartition,
    blowup,
    complete_graph,
    complete_multipartite,
    edge_density,
    from_edge_list,
    pair_density,
    random_graph,
    random_tripartite,
    read_graph,
    tensor_power,
    write_graph,
)
from .labels import regenerate
