"""Half-space stochastic six-vertex model and ASEP: exact laws, boundary
Yang-Baxter structure, Fredholm Pfaffian distribution functions, and the
limiting edge laws (symplectic/orthogonal Tracy-Widom and the crossover
family)."""

__version__ = "0.1.0"
