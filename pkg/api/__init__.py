# This file marks api as a Python package
