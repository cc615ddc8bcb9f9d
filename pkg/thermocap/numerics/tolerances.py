# Numerical tolerances shared by every module.  All thresholds are relative to
# the operator norm of the object being tested unless stated otherwise.

# Eigenvalues below rankThreshold*||A|| count as zero (supports, logarithms)
rankThreshold = 1e-12
# Relative anti-Hermitian part above which an input is rejected on ingest
hermitianRejectTol = 1e-8
# Trace slack allowed on sub-normalized states
subnormalTol = 1e-10
# Eigendecomposition reconstruction
reconstructionTol = 1e-10
# Default duality gap requested from the SDP solvers
sdpGapTol = 1e-8
# Constraint residuals accepted on a map returned from an SDP
residualTol = 1e-7
# Operator inequalities and channel conditions
operatorTol = 1e-9
# Capacity ascent stationarity
gradientTol = 1e-8
# Mixing weight used to keep capacity iterates full rank
regularization = 1e-12
# Largest Hilbert-space dimension built explicitly
maxDimension = 4096
