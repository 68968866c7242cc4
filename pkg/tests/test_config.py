import pytest

from permcirc.config import DEFAULTS, load_settings, settings_from_mapping


def test_defaults():
    assert DEFAULTS.enumeration_limit == 26
    assert DEFAULTS.ryser_cap == 32
    assert DEFAULTS.betas == (-2, 1, 1)
    assert DEFAULTS.default_mode == "graph-fix"


def test_yaml_file(tmp_path):
    path = tmp_path / "settings.yml"
    path.write_text("ryser_cap: 20\nbetas: [1, -1, 2]\nnorm_tol: 1e-8\n", encoding="utf-8")
    settings = load_settings(path)
    assert settings.ryser_cap == 20
    assert settings.betas == (1, -1, 2)
    assert settings.norm_tol == 1e-8
    assert settings.naive_cap == DEFAULTS.naive_cap


def test_working_directory_file_is_picked_up(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_settings() is DEFAULTS
    (tmp_path / "permcirc.yml").write_text("default_mode: subst\n", encoding="utf-8")
    assert load_settings().default_mode == "subst"


@pytest.mark.parametrize(
    "data",
    [{"ryser_limit": 3}, {"default_mode": "both"}, {"betas": [1, 2]}],
)
def test_bad_settings(data):
    with pytest.raises(ValueError):
        settings_from_mapping(data)


def test_empty_file_means_defaults(tmp_path):
    path = tmp_path / "empty.yml"
    path.write_text("", encoding="utf-8")
    assert load_settings(path) == DEFAULTS
