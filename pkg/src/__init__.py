"""Sources for catdual: dualities of 1D lattice models from module categories"""
