from .registry import TAGS, validate_params
from .pipeline import check_condition, hierarchy_check, monotone_characterization, sample_source, search_admissible
from .growth import bp_equivalent_exponent, extract_growth
