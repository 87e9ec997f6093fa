"""Exact audits of quasi-split iquantum groups and their modules.

This package builds finite-dimensional U_q(g)-modules over Q(q^(1/2)), restricts
them to iquantum groups given by marked Satake diagrams, and checks defining
relations, weight decompositions and highest weight classifications exactly.
"""
