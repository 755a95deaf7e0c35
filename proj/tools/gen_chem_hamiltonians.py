#!/usr/bin/env python3
# Copyright 2026 The composim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the chemistry Hamiltonians shipped in data/.

Needs openfermion, openfermionpyscf and pyscf. Not used by the build; the
JSON files are committed so the C++ side never touches chemistry code.

    python3 tools/gen_chem_hamiltonians.py data/
"""

import json
import sys
from pathlib import Path

import openfermion as of
from openfermion import Grid, jellium_model, jordan_wigner


def to_json(qubit_op, n_qubits, source):
    terms = []
    for ops, coeff in sorted(qubit_op.terms.items()):
        axes = ["I"] * n_qubits
        for q, p in ops:
            axes[q] = p
        terms.append({"pauli": "".join(axes), "coeff": float(coeff.real)})
    return {"n_qubits": n_qubits, "source": source, "terms": terms}


def jellium(n_sites):
    # 1D spinless plane-wave jellium. Grid scale 2.0 keeps every JW term
    # from cancelling; scale 1.0 drops a few at n = 6, 7.
    grid = Grid(dimensions=1, length=n_sites, scale=2.0)
    op = jordan_wigner(jellium_model(grid, spinless=True, plane_wave=True))
    op.compress()
    return to_json(op, n_sites, f"jellium 1D spinless plane-wave, {n_sites} sites, grid scale 2.0")


def hydrogen3():
    from openfermionpyscf import run_pyscf

    geometry = [("H", (0, 0, 0)), ("H", (0, 0, 0.8)), ("H", (0, 0, 1.6))]
    mol = of.MolecularData(geometry, "sto-3g", multiplicity=2, charge=0)
    mol = run_pyscf(mol)
    op = jordan_wigner(of.get_fermion_operator(mol.get_molecular_hamiltonian()))
    op.compress()
    return to_json(op, mol.n_qubits, "H3 linear chain, 0.8 A spacing, sto-3g, doublet, Jordan-Wigner")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    files = {"h3.json": hydrogen3()}
    for n in (5, 6, 7):
        files[f"jellium{n}.json"] = jellium(n)
    for name, doc in files.items():
        (out / name).write_text(json.dumps(doc, indent=1) + "\n")
        print(name, len(doc["terms"]), "terms")


if __name__ == "__main__":
    main()
