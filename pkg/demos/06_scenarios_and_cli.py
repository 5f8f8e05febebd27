# %% [markdown]
# # Scenario files and the command line
#
# Everything above is also reachable through scenario documents, which the
# ``grouphomology`` command runs and reports on.

# %%
import json
import subprocess
import sys
import tempfile

from grouphomology.harness import enumerate_scenarios, load_scenarios, run_many

doc = {"scenarios": [
    {"id": "ex", "claim": "example_1", "ring": "Z"},
    {"id": "thm", "claim": "theorem_1_4", "ring": {"kind": "Z[1/l]", "l": 2},
     "group": {"cyclic": 4}, "subgroup": {"generators": [2]}, "module": "negation", "degrees": [0, 1]},
]}
for rep in run_many(load_scenarios(json.dumps(doc))):
    print(rep.text())

# %% enumerate and run from the shell
print(len(enumerate_scenarios("lemma_1_1", 8, 3)), "scenarios for alpha, |G| <= 8, three seeds")
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
    json.dump(doc, fh)
out = subprocess.run([sys.executable, "-m", "grouphomology.cli", "verify", fh.name, "--format", "machine"],
                     capture_output=True, text=True)
print(out.stdout)
print("exit status", out.returncode)
