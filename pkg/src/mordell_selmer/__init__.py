"""3-isogeny Selmer groups of Mordell curves y^2 = x^3 + k and their average sizes."""

from .densities import AcceptableSetSpec, avg_selmer_for_set, global_r, rank_bound_report, tm_densities
from .local import local_ratio_closed, local_ratio_tamagawa
from .selmer import classify_Tm, selmer_group, selmer_size

__version__ = "0.1.0"

__all__ = [
    "AcceptableSetSpec",
    "avg_selmer_for_set",
    "classify_Tm",
    "global_r",
    "local_ratio_closed",
    "local_ratio_tamagawa",
    "rank_bound_report",
    "selmer_group",
    "selmer_size",
    "tm_densities",
]
