"""High-precision expansion coefficients of the prime zeta function about s = 1."""

from .coefficients import (AlphaEntry, AlphaTable, TruncationReport, alpha0_series, alpha_entry,
                           alpha_mobius, special_case_residual, special_case_value)
from .empirical import (IntegralEstimate, LimitEstimate, PrimeSumSeries, alpha_integral, c_integral,
                        limit_estimate, mertens_partial)
from .errors import (DataIntegrityError, DomainError, OutOfRangeError, ParseError, PrimeZetaError,
                     UnsupportedOrderError)
from .evaluate import (PrimeZetaValue, prime_zeta_derivative, prime_zeta_direct, prime_zeta_mobius,
                       prime_zeta_remainder_integral, prime_zeta_series)
from .precision import (HighPrecisionReal, PowerSeries, PrecisionPolicy, log_integral, make_real,
                        series_exp, series_log)
from .tables import MobiusTable, PrimeSieve, mobius_table, prime_count, sieve_primes
from .zeta import (LogZetaTaylor, StieltjesTable, ZetaDerivatives, g_coefficients, log_zeta_taylor,
                   stieltjes, zeta_derivatives)

__version__ = "0.1.0"
