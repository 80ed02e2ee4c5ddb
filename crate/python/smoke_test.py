"""Smoke test for the luk3py extension module.

Build and install first:  pip install ./crates/python
"""
import json

import luk3py

p = luk3py.Formula("p | ~p")
assert str(p) == "p | ~p"
assert p.atoms() == ["p"]
assert p.eval({"p": "u"}) == "u"
assert not p.is_valid()
assert luk3py.counter_model("p | ~p") == {"p": "u"}
assert luk3py.counter_model("p -> p") is None
assert luk3py.Formula("L p -> p").is_valid()

cert = luk3py.prove("[p ; p ; p]")
assert json.loads(cert) == {"rule": "axiom", "sequent": "[p ; p ; p]", "premises": []}
assert luk3py.check(cert) == "proof"
assert luk3py.prove("[ ; ; p | ~p]") is None

witness, cert = luk3py.refute("![ ; ; p | ~p]")
assert witness == "p=u"
assert luk3py.check(cert) == "refutation"

theory = "fact: a.\ndefault: a : b / b.\ndefault: a : ~b / ~b.\n"
assert luk3py.extensions(theory) == [(["a", "M b"], [0]), (["a", "M ~b"], [1])]
cert = luk3py.brave(theory, include=["M b"], exclude=["M ~b"])
assert luk3py.check(cert) == "brave"
assert luk3py.brave(theory, include=["M b", "M ~b"]) is None
assert luk3py.check(luk3py.skeptical(theory, ["M b | M ~b"])) == "skeptical"
assert luk3py.skeptical(theory, ["M b"]) is None
assert luk3py.skeptical(theory, ["M b"], constraints=["-M ~b"]) is not None

try:
    luk3py.check(cert.replace("M b", "M c"))
except ValueError:
    pass
else:
    raise AssertionError("tampered certificate accepted")

try:
    luk3py.Formula("p ->")
except ValueError as e:
    assert "line 1" in str(e)
else:
    raise AssertionError("parse error not raised")

print("luk3py smoke test passed")
