from .properties import (
    PiconePair,
    coercivity_check,
    picone_matrix,
    picone_sweep,
    picone_term,
    positivity_check,
)
