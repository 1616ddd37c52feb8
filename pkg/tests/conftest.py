import pytest

from unirep.fixtures import fixture_derivation, load_fixture

ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {title}")


@pytest.fixture(scope="session")
def turkish():
    return fixture_derivation(load_fixture("turkish_diye"))


@pytest.fixture(scope="session")
def english():
    return fixture_derivation(load_fixture("english_svo"))


@pytest.fixture(scope="session")
def french():
    return fixture_derivation(load_fixture("french_passe_compose"))
