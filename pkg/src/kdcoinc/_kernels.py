"""Kernel dispatch: numba loops or the numpy fallback, fixed at import."""
from ._accel import USE_NUMBA

if USE_NUMBA:
    from ._kernels_nb import (commute_table, det_lu, diagram_from_dims, dim_table,
                              minor_moduli, rank_qrcp)
else:
    from ._kernels_np import (commute_table, det_lu, diagram_from_dims, dim_table,
                              minor_moduli, rank_qrcp)

__all__ = ["commute_table", "det_lu", "diagram_from_dims", "dim_table",
           "minor_moduli", "rank_qrcp"]
