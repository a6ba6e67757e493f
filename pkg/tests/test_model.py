from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from citeaudit.model import (
    FailureMode,
    EvidenceItem,
    Identifier,
    IdentifierKind,
    Span,
    Verdict,
    VerdictStatus,
    author_from_dict,
    author_to_dict,
    identifier_from_dict,
    identifier_to_dict,
    normalize_name,
    parse_verdict,
    record_from_dict,
    record_to_dict,
    serialize_verdict,
)
from tests.conftest import make_citation, make_record


class TestNormalizeName:
    def test_given_then_surname(self):
        a = normalize_name("Ashish Vaswani")
        assert a.surname == "vaswani"
        assert a.given_tokens == ("ashish",)
        assert not a.is_placeholder

    def test_comma_form(self):
        a = normalize_name("Kingma, Diederik P.")
        assert a.surname == "kingma"
        assert a.given_tokens == ("diederik", "p")

    def test_particle_stays_with_surname(self):
        a = normalize_name("T. Van Cutsem")
        assert a.surname == "van cutsem"
        assert a.given_tokens == ("t",)

    def test_diacritics_fold(self):
        assert normalize_name("José García").surname == "garcia"
        assert normalize_name("Łukasz Kaiser").surname == "kaiser"

    def test_placeholder_names(self):
        assert normalize_name("Firstname Lastname").is_placeholder
        assert normalize_name("Others").is_placeholder
        assert normalize_name("Anonymous").is_placeholder
        assert not normalize_name("Jane Doe").is_placeholder

    def test_single_token(self):
        a = normalize_name("Nanda")
        assert a.surname == "nanda"
        assert a.given_tokens == ()


class TestVerdictContract:
    def test_hallucinated_requires_both_codes(self):
        with pytest.raises(ValueError):
            Verdict(status=VerdictStatus.HALLUCINATED, primary=FailureMode.TF)

    def test_hallucinated_rejects_equal_codes(self):
        with pytest.raises(ValueError):
            Verdict(
                status=VerdictStatus.HALLUCINATED,
                primary=FailureMode.TF,
                secondary=FailureMode.TF,
            )

    def test_hallucinated_accepts_distinct_codes(self):
        v = Verdict(
            status=VerdictStatus.HALLUCINATED,
            primary=FailureMode.TF,
            secondary=FailureMode.SH,
        )
        assert v.primary is not v.secondary

    def test_verified_requires_record(self):
        with pytest.raises(ValueError):
            Verdict(status=VerdictStatus.VERIFIED)

    def test_verified_rejects_codes(self):
        with pytest.raises(ValueError):
            Verdict(
                status=VerdictStatus.VERIFIED,
                matched_record=make_record(),
                primary=FailureMode.TF,
            )

    def test_unverifiable_requires_cause(self):
        with pytest.raises(ValueError):
            Verdict(status=VerdictStatus.UNVERIFIABLE)
        v = Verdict(status=VerdictStatus.UNVERIFIABLE, cause="offline")
        assert v.cause == "offline"


class TestSerialization:
    def test_verdict_round_trip(self):
        v = Verdict(
            status=VerdictStatus.HALLUCINATED,
            citation_key="k1",
            primary=FailureMode.IH,
            secondary=FailureMode.SH,
            evidence=(
                EvidenceItem(
                    mode=FailureMode.IH, detail="id points elsewhere", score=0.2
                ),
            ),
        )
        assert parse_verdict(serialize_verdict(v)) == v

    def test_verified_round_trip(self):
        v = Verdict(
            status=VerdictStatus.VERIFIED,
            citation_key="k2",
            matched_record=make_record(pages="10-20"),
        )
        assert parse_verdict(serialize_verdict(v)) == v

    def test_unverifiable_round_trip(self):
        v = Verdict(status=VerdictStatus.UNVERIFIABLE, citation_key="k3", cause="offline")
        assert parse_verdict(serialize_verdict(v)) == v

    def test_serialized_form_is_json(self):
        v = Verdict(status=VerdictStatus.UNVERIFIABLE, cause="offline")
        payload = json.loads(serialize_verdict(v))
        assert payload["status"] == "unverifiable"
        assert payload["cause"] == "offline"

    def test_record_round_trip_preserves_pages(self):
        r = make_record(pages="436-444")
        assert record_from_dict(record_to_dict(r)) == r

    def test_author_round_trip(self):
        a = normalize_name("T. Van Cutsem")
        assert author_from_dict(author_to_dict(a)) == a

    def test_identifier_round_trip(self):
        i = Identifier(
            kind=IdentifierKind.DOI, value="10.1038/nature14539", syntactically_valid=True
        )
        assert identifier_from_dict(identifier_to_dict(i)) == i


class TestSpan:
    def test_str_shows_position(self):
        s = Span(3, 1, 3, 40)
        assert "3" in str(s)


@given(
    status=st.sampled_from(list(VerdictStatus)),
    primary=st.sampled_from(list(FailureMode)),
    secondary=st.sampled_from(list(FailureMode)),
)
def test_verdict_constructor_never_allows_equal_codes(status, primary, secondary):
    kwargs = {"status": status}
    if status is VerdictStatus.HALLUCINATED:
        kwargs.update(primary=primary, secondary=secondary)
    elif status is VerdictStatus.UNVERIFIABLE:
        kwargs["cause"] = "offline"
    else:
        kwargs["matched_record"] = make_record()
    if status is VerdictStatus.HALLUCINATED and primary is secondary:
        with pytest.raises(ValueError):
            Verdict(**kwargs)
    else:
        v = Verdict(**kwargs)
        if v.status is VerdictStatus.HALLUCINATED:
            assert v.primary is not v.secondary
