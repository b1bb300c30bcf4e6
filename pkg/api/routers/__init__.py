# This file marks api/routers as a Python package
