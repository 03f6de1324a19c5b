# Permutation polynomial engine package
