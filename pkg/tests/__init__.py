# Test package for vtmos-sim
