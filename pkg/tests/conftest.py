import importlib

import pytest

from fracnls import special_functions


def _backends():
    names = ["python"]
    try:
        importlib.import_module("fracnls._kernels")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


@pytest.fixture(params=_backends())
def backend(request, monkeypatch):
    """Run a test against each available kernel backend."""
    module = "fracnls._kernels" if request.param == "cython" else "fracnls._kernels_py"
    monkeypatch.setattr(special_functions, "_k", importlib.import_module(module))
    return request.param
