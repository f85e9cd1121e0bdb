"""Chebyshev-polynomial authentication and key agreement for V2G networks.

Layers:
  cheb     - T_n(x) mod N via 2x2 matrix binary exponentiation, test
             oracles, strong-modulus and exponent generation
  protocol - the four-phase TA/EV/AGT scheme with op-count instrumentation
  wire     - bit-exact message framing and communication-cost accounting
  harness  - deterministic honest and adversarial session simulation
  bench    - timing and size reports (CLI: `chebauth`)
"""

from .cheb import (
    ModulusCertificate,
    cheb_eval,
    cheb_eval_recursive,
    dlog_bruteforce,
    gen_exponent,
    gen_modulus,
    is_probable_prime,
    mat_pow,
)
from .encoding import identity
from .protocol import (
    AuthError,
    OpCounter,
    ProtocolError,
    SystemParams,
    agt_confirm,
    agt_handle_login,
    agt_register,
    ev_handle_response,
    ev_login,
    ev_register,
    ta_setup,
)
from .harness import build_deployment, run_honest, run_with_adversary

__version__ = "0.1.0"
