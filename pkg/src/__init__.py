"""Source root for iquantum.

The package lives in ``src/iquantum``; this file lets the tests import it from a checkout.
"""
