"""Hypothesis strategies built on the seeded generator."""
from hypothesis import strategies as st

from casct.randgen import random_instance

seeds = st.integers(min_value=0, max_value=10_000)
instances = seeds.map(random_instance)
