import json

import pytest

from bubblestar.cayley import bubble_sort_star
from bubblestar.certify import (
    INCOMPLETE,
    PRODUCERS,
    REFUTED,
    VERIFIED,
    Certificate,
    CertificateError,
    cert_bs3_table,
    cert_canonical_pms,
    cert_cross_edges,
    cert_hampath,
    cert_mp,
    cert_outer_disjoint,
    cert_regularity,
    cert_smp,
    cert_stitching,
    cert_triviality,
    graph_for,
    outer_neighbors_disjoint,
    validate,
)


def round_trip(c):
    text = c.dumps()
    again = Certificate.loads(text)
    assert again.dumps() == text
    return again


CASES = [
    (cert_regularity, (2,)),
    (cert_regularity, (5,)),
    (cert_cross_edges, (4,)),
    (cert_cross_edges, (5,)),
    (cert_outer_disjoint, (4,)),
    (cert_canonical_pms, (5,)),
    (cert_bs3_table, ()),
    (cert_mp, (3,)),
    (cert_mp, (4,)),
    (cert_smp, (3,)),
    (cert_smp, (4,)),
    (cert_triviality, (3,)),
    (cert_triviality, (4,)),
]


@pytest.mark.parametrize("producer,args", CASES, ids=lambda x: getattr(x, "__name__", str(x)))
def test_fresh_certificates_validate(producer, args):
    c = producer(*args)
    assert c.verdict == VERIFIED
    c2 = round_trip(c)
    assert validate(c2, graph_for(c2)) == VERIFIED


def test_stitching_and_hampath_certificates():
    c = cert_stitching(5, trials=10, seed=4, controls=2)
    assert c.verdict == VERIFIED and len(c.witness["trials"]) == 10
    assert validate(round_trip(c), bubble_sort_star(5)) == VERIFIED
    h = cert_hampath(4, "1234", "2134")
    assert h.verdict == VERIFIED and h.witness["path"][0] == "1234"
    assert validate(round_trip(h), bubble_sort_star(4)) == VERIFIED
    bad = cert_hampath(4, "1234", "2314")
    assert bad.verdict == REFUTED and bad.witness["status"] == "parity-obstruction"


def test_corrupted_witness_is_refuted():
    c = cert_stitching(5, trials=3, seed=1, controls=1)
    g = bubble_sort_star(5)
    d = json.loads(c.dumps())
    m = d["witness"]["trials"][0]["matching"]
    m[0] = list(d["witness"]["trials"][0]["faults"][0])  # use a deleted edge
    assert validate(Certificate.loads(json.dumps(d)), g) == REFUTED

    t = cert_bs3_table()
    d = json.loads(t.dumps())
    d["witness"]["rows"][0]["completions"][0]["surviving"] = ["ghp"]
    assert validate(Certificate.loads(json.dumps(d)), bubble_sort_star(3)) == REFUTED

    r = cert_regularity(4)
    d = json.loads(r.dumps())
    d["witness"]["degrees"] = [4]
    assert validate(Certificate.loads(json.dumps(d)), bubble_sort_star(4)) == REFUTED


def test_wrong_graph_is_rejected():
    c = cert_regularity(4)
    with pytest.raises(CertificateError, match="digest"):
        validate(c, bubble_sort_star(5))


def test_malformed_certificates():
    with pytest.raises(CertificateError):
        Certificate.loads("not json")
    with pytest.raises(CertificateError):
        Certificate.loads("[]")
    with pytest.raises(CertificateError):
        Certificate.loads('{"schema": 99}')
    with pytest.raises(CertificateError):
        Certificate.loads('{"schema": 1, "claim_id": "x"}')
    c = cert_regularity(3)
    d = json.loads(c.dumps())
    del d["witness"]["order"]
    with pytest.raises(CertificateError, match="malformed"):
        validate(Certificate.loads(json.dumps(d)), bubble_sort_star(3))
    d = json.loads(c.dumps())
    d["claim_id"] = "nonsense/n=3"
    with pytest.raises(CertificateError, match="unknown"):
        validate(Certificate.loads(json.dumps(d)), bubble_sort_star(3))


def test_field_order_and_layout():
    text = cert_regularity(3).dumps()
    keys = list(json.loads(text))
    assert keys == ["schema", "claim_id", "parameters", "verdict", "witness", "tool_version", "graph_digest"]
    assert text.endswith("}\n") and '"degrees": [3]' in text


def test_incomplete_certificate_validates_as_incomplete():
    c = cert_smp(4, budget=5)
    assert c.verdict == INCOMPLETE
    assert validate(c, bubble_sort_star(4)) == INCOMPLETE


def test_outer_neighbors_disjoint_guards():
    g = bubble_sort_star(4)
    with pytest.raises(ValueError):
        outer_neighbors_disjoint(g, 0, 0)
    with pytest.raises(ValueError):
        outer_neighbors_disjoint(g, g.index("1234"), g.index("1243"))
    assert outer_neighbors_disjoint(g, g.index("1234"), g.index("2134"))


def test_producers_registry():
    assert {"regularity", "mp", "smp", "mp-trivial", "bs3-table", "stitching"} <= set(PRODUCERS)
    assert PRODUCERS["bs3-table"]().claim_id == "bs3-table"


def test_bs3_table_contents():
    c = cert_bs3_table()
    rows = c.witness["rows"]
    assert [r["forced"] for r in rows] == [["a", x] for x in "bcdef"]
    row_d = rows[2]
    assert {x["extra"] for x in row_d["completions"]} == {"g", "h", "p"}
    assert all(x["surviving"] for r in rows for x in r["completions"])
