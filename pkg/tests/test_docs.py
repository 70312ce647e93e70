import doctest
import importlib

import pytest

MODULES = ["discrete_wigner", "discrete_wigner.linalg", "discrete_wigner.scalars",
           "discrete_wigner.model", "discrete_wigner.wigner", "discrete_wigner.export",
           "discrete_wigner.canonical", "discrete_wigner.cli"]


@pytest.mark.parametrize("name", MODULES)
def test_docstring_examples(name):
    result = doctest.testmod(importlib.import_module(name))
    assert result.failed == 0


def test_readme_example():
    from pathlib import Path
    readme = Path(__file__).parents[1] / "README.md"
    result = doctest.testfile(str(readme), module_relative=False)
    assert result.failed == 0
