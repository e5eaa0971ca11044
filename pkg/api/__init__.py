# Randomness desk API
