"""Entropy and ergodic capacity of alpha-eta-mu and alpha-lambda-mu fading.

Closed forms sit next to quadrature and Monte-Carlo oracles; see
:mod:`fadingcap.corrections` for the named fixes applied to the
uncorrected closed forms.
"""

from .capacity import (CapacityReport, OpraConstraint, c_opra_closed, c_opra_oracle, c_ora_closed, c_ora_oracle,
                       capacity_report, solve_gamma0)
from .corrections import ALL as ALL_CORRECTIONS
from .corrections import NONE as NO_CORRECTIONS
from .corrections import parse_corrections
from .entropy import (EntropyReport, cross_entropy_closed, cross_entropy_oracle, entropy_oracle, relative_entropy,
                      shannon_entropy_closed)
from .errors import (BracketError, ClosedFormUnavailable, DegenerateParametersError, DomainError, FadingError,
                     IntegrandDomainError, QuadratureError)
from .models import (AlphaEtaMuParams, AlphaLambdaMuParams, cdf_snr, db_to_linear, moment, pdf_snr, quantile,
                     sample, to_eta_model)

__all__ = [
    "AlphaEtaMuParams", "AlphaLambdaMuParams", "to_eta_model", "db_to_linear", "pdf_snr", "cdf_snr", "quantile",
    "sample", "moment", "shannon_entropy_closed", "entropy_oracle", "cross_entropy_closed", "cross_entropy_oracle",
    "relative_entropy", "EntropyReport", "c_ora_closed", "c_ora_oracle", "c_opra_closed", "c_opra_oracle",
    "solve_gamma0", "capacity_report", "CapacityReport", "OpraConstraint", "parse_corrections", "ALL_CORRECTIONS",
    "NO_CORRECTIONS", "FadingError", "DomainError", "QuadratureError", "IntegrandDomainError", "BracketError",
    "DegenerateParametersError", "ClosedFormUnavailable",
]
