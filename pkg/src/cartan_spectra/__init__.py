"""Mass operators on a Cartan subalgebra and the eigenvectors of the Cartan matrix."""

__version__ = "0.1.0"

from .rootsys import RootSystem, SimpleType, all_types, bicolor, build_root_system, cartan_matrix  # noqa: E402
from .chevalley import LieAlgebra, build_lie_algebra, star  # noqa: E402
from .apposition import apposition_data, mass_operator, spectra  # noqa: E402
from .patterns import cluster_report, eigen_table, pf_type_analysis, pf_vector  # noqa: E402
from .verify import verify_type  # noqa: E402

__all__ = [
    "RootSystem", "SimpleType", "all_types", "bicolor", "build_root_system", "cartan_matrix",
    "LieAlgebra", "build_lie_algebra", "star",
    "apposition_data", "mass_operator", "spectra",
    "cluster_report", "eigen_table", "pf_type_analysis", "pf_vector",
    "verify_type",
]
