"""Shared fixtures: the four-type reference severity set and organization
profiles used as regression anchors throughout the suite."""

import pytest

from riskshare import IncidentMix, RiskPreferences, SeverityEntry, SeverityModel

REFERENCE_ENTRIES = (
    SeverityEntry(type_id=1, mu=-2.5996, sigma=3.2798, label="PV"),
    SeverityEntry(type_id=2, mu=-0.7916, sigma=3.1122, label="DB"),
    SeverityEntry(type_id=3, mu=-3.4100, sigma=2.8577, label="FE"),
    SeverityEntry(type_id=4, mu=-1.9557, sigma=3.3629, label="ITE"),
)

ORG_PROBS = {
    1: (0.3383, 0.5717, 0.0700, 0.0200),
    2: (0.4401, 0.3340, 0.1764, 0.0495),
    3: (0.4700, 0.3400, 0.1600, 0.0300),
    4: (0.4340, 0.4360, 0.0600, 0.0700),
    5: (0.2300, 0.4800, 0.1900, 0.1000),
}

# expected figures for the reference portfolios (millions)
EXPECTED_VAR90 = {1: 13.6984, 2: 8.5989, 3: 8.7049, 4: 11.4981, 5: 11.3691}
EXPECTED_OPTIMUM = {1: 11.3366, 2: 7.4182, 3: 7.7513, 4: 9.7930, 5: 9.2889}

# reference solved contract for organization 1 (first solver trial)
ORG1_SOLVED_THETA = (1, 0, 0, 0)
ORG1_SOLVED_D = (0.0531, 0.1011, 0.1167, 0.1151)
ORG1_PREMIUM = (2.2977, 4.6595)
ORG1_BUYER_WITH_INS = 9.0389
ORG1_SELLER_WITH_INS = 2.2977


@pytest.fixture(scope="session")
def severity() -> SeverityModel:
    return SeverityModel(entries=REFERENCE_ENTRIES)


@pytest.fixture(scope="session")
def org_mixes() -> dict[int, IncidentMix]:
    return {k: IncidentMix(probs=p) for k, p in ORG_PROBS.items()}


@pytest.fixture(scope="session")
def prefs() -> RiskPreferences:
    return RiskPreferences(alpha=0.95, beta=0.90)
