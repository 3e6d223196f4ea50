import pytest

import synthlor
from synthlor.versioning import make_version_int_tuple, schema_version


def test_make_version_int_tuple():
    assert make_version_int_tuple("0") == ()
    assert make_version_int_tuple("0.99rc6") == (0, 99)
    assert make_version_int_tuple("1") == (1,)
    assert make_version_int_tuple("1.0") == (1,)
    assert make_version_int_tuple("1.2r2") == (1, 2)
    assert make_version_int_tuple("2.6.0a0") == (2, 6)
    assert make_version_int_tuple(".") == ()
    assert make_version_int_tuple("foo") == ()


def test_schema_version():
    assert schema_version(1) == (1,)
    assert schema_version("1") == (1,)
    assert schema_version("1.0") == (1,)
    for bad in (0, 2, "1.1", "v1", 1.0, True, None):
        with pytest.raises(synthlor.ConfigError):
            schema_version(bad)
    with pytest.raises(synthlor.ConfigError, match='^report.version: '):
        schema_version(3, where='report.version')


def test_package_version():
    assert make_version_int_tuple(synthlor.__version__) >= (0, 3)
