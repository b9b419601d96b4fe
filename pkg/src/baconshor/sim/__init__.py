"""Circuit-level Monte-Carlo simulation of the fault-tolerant gadgets."""

from .circuits import (BlockInfo, Circuit, CircuitKind, Location,
                       build_circuit, cnot_wiring, location_tally)
from .decoder import Classification, TrialOutcome, decode, decode_batch
from .engine import FaultEvent, Trace, propagate_events, run_batch, sample_faults
from .harness import (CheckReport, EstimateReport, check_bound, estimate,
                      exhaustive_single_faults, second_order_failure_sum,
                      verify_cnot_rule)
from .pauli import PauliMask

__all__ = [
    "BlockInfo", "CheckReport", "Circuit", "CircuitKind", "Classification",
    "EstimateReport", "FaultEvent", "Location", "PauliMask", "Trace",
    "TrialOutcome", "build_circuit", "check_bound", "cnot_wiring", "decode",
    "decode_batch", "estimate", "exhaustive_single_faults", "location_tally",
    "propagate_events", "run_batch", "sample_faults",
    "second_order_failure_sum", "verify_cnot_rule",
]
