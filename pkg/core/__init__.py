# Qubit Markov channel toolkit: solvers, Kraus maps, capacity and entanglement diagnostics
