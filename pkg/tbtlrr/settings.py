# Max-abs deviation of T·T' from the identity accepted for a transform.
ORTHO_TOLERANCE = 1e-10

# Singular values below this fraction of the largest are treated as zero
# when deciding ranks.
RANK_RTOL = 1e-12

# Entries within this fraction of a row's largest magnitude count as tied
# when fixing the signs of a learned transform.
SIGN_TIE_RTOL = 1e-10

# Relative cutoff for the skinny T-TSVD that builds the dictionary.
DICTIONARY_RTOL = 1e-10

# ADMM penalty schedule and stopping tolerance.
DEFAULT_MU = 1e-7
DEFAULT_MU_MAX = 1e7
DEFAULT_RHO = 1.5
DEFAULT_EPS = 1e-7
# Iteration cap. mu saturates after ~68 iterations at rho = 1.5.
DEFAULT_MAX_ITERS = 500

# Guard in the diagonal-ratio slice weights.
DEFAULT_EPS_GUARD = 1e-10

# Added to node degrees before the D^-1/2 normalization.
DEGREE_GUARD = 1e-12

# Number of k-means runs per affinity matrix.
DEFAULT_RESTARTS = 50
KMEANS_MAX_ITER = 300

# Results CSV schema version, written in the header of every results file.
RESULTS_SCHEMA_VERSION = 1
