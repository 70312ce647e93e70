"""
Bringing your own model
=======================

Any finite system with simple position and momentum spectra can be loaded
from JSON.  Here is a three-level toy whose momentum operator is not
tridiagonal, so the reflection symmetries of W are not expected and the
verifier reports them as skipped.
"""

import json

from discrete_wigner import load_model, verify_properties, wigner_matrix
from discrete_wigner.model import model_to_dict

doc = {
    "name": "toy",
    "dimension": 3,
    "position_matrix": [[-1, 0, 0], [0, 0, 0], [0, 0, 1]],
    "momentum_matrix": [[0, 1, 0], [1, 0, 0], [0, 0, 2]],
    "position_spectrum": [-1, 0, 1],
    "momentum_spectrum": [-1, 1, 2],
    "energies": ["1/2", "3/2", "5/2"],
}
model = load_model(doc)

for n in range(3):
    print(f"W({n}) =", [[str(x) for x in row] for row in wigner_matrix(model, n).entries])
    for line in verify_properties(model, n).lines():
        print("   ", line)

###############################################################################
# The same document can be written back out, e.g. for the CLI's ``--model``.

print(json.dumps(model_to_dict(model))[:120], "...")
