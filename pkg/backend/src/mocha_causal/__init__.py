"""
MOCHA: multi-order dynamic causal temporal point processes.

Learns time-varying causal graphs between event types from irregularly
timed event sequences, together with a multi-order excitation model.
"""

__version__ = "0.1.0"
