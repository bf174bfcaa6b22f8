"""
config.py

Configuration file containing constants and default parameters for the MCM-aware
transpilation pipeline, the noise simulator and the evaluation harness.

Sections:
1. Layout Parameters
2. Routing Parameters
3. Scheduling Parameters
4. Noise Model
5. Profiling
6. Device Durations
7. Error-Map Profiles
8. Evaluation Protocol
9. Benchmark Suite
10. Output Folders
"""

# Layout Parameters
# -----------------
# Seed score weights (alpha, beta, gamma, delta, epsilon): MCM, 2Q, 1Q, readout, connectivity
SEED_WEIGHTS = {
    'alpha': 0.25,
    'beta': 0.25,
    'gamma': 0.1,
    'delta': 0.2,
    'epsilon': 0.2,
}

# Layout cost weights for the distance term and the four error terms
LAYOUT_WEIGHTS = {
    'w_dist': 0.45,
    'w_mcm': 0.2,
    'w_2q': 0.2,
    'w_1q': 0.05,
    'w_ro': 0.1,
}

LOOK_AHEAD = 6
TAU_MCM = 0.02
N_SEED = 4

# Noise-unaware profile used by the distance-only baseline
DISTANCE_ONLY_SEED_WEIGHTS = {
    'alpha': 0.0,
    'beta': 0.0,
    'gamma': 0.0,
    'delta': 0.0,
    'epsilon': 1.0,
}
DISTANCE_ONLY_LAYOUT_WEIGHTS = {
    'w_dist': 1.0,
    'w_mcm': 0.0,
    'w_2q': 0.0,
    'w_1q': 0.0,
    'w_ro': 0.0,
}

# Above this many k-subsets the worst-mapping search switches from enumeration to greedy growth
EXHAUSTIVE_SUBGRAPH_LIMIT = 5000

# Routing Parameters
# ------------------
DELTA_SWAP = 0.008
LOOKAHEAD_WEIGHT = 0.5
MAX_ROUTING_ITERATIONS = 10000
STALL_LIMIT = 25
ROUTING_MODES = ('mera', 'distance-only')
LAYOUT_METHODS = ('mera', 'trivial', 'worst')

# Scheduling Parameters
# ---------------------
# Idle windows at least this fraction of the MCM window receive DD even without a nearby MCM
MIN_DD_WINDOW_FRACTION = 2.0 / 3.0
SCHEDULING_MODES = ('alap', 'asap')
DD_MODES = ('cadd', 'none')
DD_LABEL = 'dd'

# Noise Model
# -----------
NOISE_CHANNELS = {
    'gate': True,
    'readout': True,
    'mcm': True,
    'idle': True,
    'crosstalk': True,
    'crosstalk_factor': 0.25,
    'dd_suppression': 0.2,
    'max_rus_repeats': 64,
}
MAX_SIM_QUBITS = 14
EXACT_PRUNE_THRESHOLD = 1e-12

# Profiling
# ---------
PROFILING_SHOTS = 1024
PROFILING_CI_ALPHA = 0.05
# Qubits simulated together per profiling batch; profiled qubits never interact
PROFILING_BATCH_QUBITS = 7
CALIBRATION_MAX_AGE_HOURS = 24

# Device Durations
# ----------------
# Device-wide operation durations in nanoseconds
DURATIONS_NS = {
    'single_qubit': 60,
    'two_qubit': 660,
    'measure': 1400,
    'reset': 1200,
}
TIME_UNIT = 'ns'

# Error-Map Profiles
# ------------------
EAGLE_PROFILE = {
    'mean_mcm': 0.0342,
    'max_mcm': 0.4258,
    'min_mcm': 0.0005,
    'heavy_tail_fraction': 0.03,
    'body_sigma': 0.8,
    'tail_floor': 0.1,
    'e1q_range': (1.5e-4, 8e-4),
    'e2q_range': (4e-3, 1.8e-2),
    'ro_range': (6e-3, 3e-2),
    't1_range': (120_000.0, 300_000.0),
    't2_ratio_range': (0.4, 1.2),
}

HERON_PROFILE = {
    'mean_mcm': 0.0119,
    'max_mcm': 0.1404,
    'min_mcm': 0.0,
    'heavy_tail_fraction': 0.02,
    'body_sigma': 0.8,
    'tail_floor': 0.1,
    'e1q_range': (1e-4, 5e-4),
    'e2q_range': (2e-3, 8e-3),
    'ro_range': (4e-3, 2e-2),
    't1_range': (150_000.0, 350_000.0),
    't2_ratio_range': (0.4, 1.2),
}

ZERO_PROFILE = {
    'mean_mcm': 0.0,
    'max_mcm': 0.0,
    'min_mcm': 0.0,
    'heavy_tail_fraction': 0.0,
    'body_sigma': 0.8,
    'tail_floor': 0.1,
    'e1q_range': (0.0, 0.0),
    'e2q_range': (0.0, 0.0),
    'ro_range': (0.0, 0.0),
    't1_range': (1e12, 1e12),
    't2_ratio_range': (1.0, 1.0),
}

ERROR_PROFILES = {
    'eagle': EAGLE_PROFILE,
    'heron': HERON_PROFILE,
    'zero': ZERO_PROFILE,
}
DEFAULT_PROFILE = 'eagle'
DEFAULT_DEVICE_SEED = 7

# Evaluation Protocol
# -------------------
EVAL_ITERATIONS = 5
EVAL_SHOTS = 1024
EVAL_SEED = 2024
COMPILERS = ('mera', 'mera-no-cadd', 'distance-only', 'worst')
REPORT_COLUMNS = [
    'benchmark', 'compiler', 'qubits', 'path', 'swap', 'fidelity', 'fidelity_std',
    'attempts', 'esp', 'compile_time_s', 'shots', 'iterations', 'seed',
]
TUNING_TRIALS = 30

# Benchmark Suite
# ---------------
RUS_SIZES = (4, 6, 8, 10, 12, 14, 16, 18)
RUS_STAGES = 5
H_LADDER_RUNGS = 5
DEFAULT_SUITE = [f'rus({k})' for k in RUS_SIZES] + [
    'bv_reuse(4,2)',
    'h_ladder(3,2)',
    'benchmarks/ipea_3bit.qasm',
]
TUNING_SUITE = ['bv_reuse(4,2)', 'h_ladder(3,2)', 'rus(4)', 'rus(6)']

# Output Folders
# --------------
REPORTS_FOLDER = 'reports'
BENCHMARKS_FOLDER = 'benchmarks'
