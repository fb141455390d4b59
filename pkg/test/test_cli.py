#
# Copyright 2026 fingerprint-dedup developers
#
# ### MIT license
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#
"""Tests for the command line entry point (main.run).

The command line replaces the root logger's handlers, so output is checked
through capsys and the root logger is restored after each test.
"""
import os

import pytest

from fingerprint_dedup.main import EXIT_CAP_EXCEEDED, EXIT_DATA_ERROR, EXIT_SUCCESS, EXIT_USAGE, run
from fingerprint_dedup.models.cluster_table import ClusterTable
from fingerprint_dedup.models.duplicate_report import DuplicateReport

from conftest import EXAMPLE_KEY, EXAMPLE_SIGNATURE_FILE


GENERATOR_FLAGS = ['--min-minutiae', '12', '--max-minutiae', '20']


@pytest.fixture(autouse=True)
def _restore_logging(restore_root_logger):
    yield restore_root_logger


@pytest.fixture
def generated(tmp_path, capsys):
    """Synthetic corpus directory with 40 subjects and 4 exact duplicates."""
    out = tmp_path / "corpus"
    assert run(['generate', '--out', str(out), '--subjects', '40', '--dup', '0.1', '--seed', '7',
                *GENERATOR_FLAGS]) == EXIT_SUCCESS
    capsys.readouterr()
    yield out


def _lines(capsys):
    return capsys.readouterr().out.splitlines()


def _fields(lines):
    return dict(line.split('\t', 1) for line in lines if '\t' in line)


# ===========================================================================
# usage
# ===========================================================================

def test_help_shows_defaults(capsys, monkeypatch):
    # wide enough for every help entry to fit on one line
    monkeypatch.setenv('COLUMNS', '240')
    assert run(['identify', '--help']) == EXIT_SUCCESS
    out = capsys.readouterr().out
    assert "(default: 15)" in out
    assert "(default: 90)" in out


def test_unknown_flag_is_a_usage_error(capsys):
    assert run(['estimate', '--n', '10', '--avg', '2', '--bogus']) == EXIT_USAGE


def test_missing_subcommand_is_a_usage_error(capsys):
    assert run([]) == EXIT_USAGE


# ===========================================================================
# commands without corpus
# ===========================================================================

def test_estimate(capsys):
    assert run(['estimate', '--n', '10000000', '--avg', '2', '--ms-per-cmp', '1']) == EXIT_SUCCESS
    fields = _fields(_lines(capsys))
    assert fields['classes'] == '5000000'
    assert fields['comparisons-per-class'] == '1'
    assert fields['comparisons'] == '5000000'
    assert fields['wall-time'] == "1h23'20\""


def test_estimate_rejects_average_below_one(capsys):
    assert run(['estimate', '--n', '10', '--avg', '0.5']) == EXIT_DATA_ERROR


def test_regress_published_pairs(capsys):
    assert run(['regress', '--predict', '10000000']) == EXIT_SUCCESS
    fields = _fields(_lines(capsys))
    assert float(fields['slope']) == pytest.approx(6.62936e-08, rel=1e-4)
    assert float(fields['10000000']) == pytest.approx(1.664715563, rel=1e-6)


def test_regress_csv_lists_extrapolation_sizes(capsys):
    assert run(['regress', '--csv']) == EXIT_SUCCESS
    lines = _lines(capsys)
    assert lines[2] == 'size,predicted_avg'
    assert lines[-1].startswith('20000000,')


def test_config_prints_effective_values(tmp_path, capsys, monkeypatch):
    config = tmp_path / "config.yml"
    config.write_text("grid-n: 4\n", encoding='utf-8')
    monkeypatch.setenv('FINGERPRINT_DEDUP_CONFIG', str(config))
    assert run(['config']) == EXIT_SUCCESS
    assert 'grid-n: 4' in _lines(capsys)


def test_config_flag_overrides_environment(tmp_path, capsys, monkeypatch):
    env_config = tmp_path / "env.yml"
    env_config.write_text("grid-n: 4\n", encoding='utf-8')
    flag_config = tmp_path / "flag.yml"
    flag_config.write_text("grid-n: 6\n", encoding='utf-8')
    monkeypatch.setenv('FINGERPRINT_DEDUP_CONFIG', str(env_config))
    assert run(['--config', str(flag_config), 'config']) == EXIT_SUCCESS
    assert 'grid-n: 6' in _lines(capsys)


def test_bad_config_is_a_data_error(tmp_path, capsys):
    config = tmp_path / "config.yml"
    config.write_text("no-such-setting: 1\n", encoding='utf-8')
    assert run(['--config', str(config), 'config']) == EXIT_DATA_ERROR
    assert 'no-such-setting' in capsys.readouterr().err


# ===========================================================================
# corpus commands
# ===========================================================================

def test_generate_writes_corpus_and_ground_truth(generated):
    names = os.listdir(generated)
    assert len([n for n in names if n.endswith('.sig')]) == 44
    assert 'ground_truth.tsv' in names


def test_index_and_stats(tmp_path, generated, capsys):
    table_path = tmp_path / "table.tsv"
    assert run(['index', '--corpus', str(generated), '--table', str(table_path), '--jobs', '1']) == EXIT_SUCCESS
    assert _fields(_lines(capsys))['records'] == '44'
    table = ClusterTable.load_file(str(table_path))
    assert table.size == 44
    assert table.grid_n == 5

    assert run(['stats', '--table', str(table_path), '--csv']) == EXIT_SUCCESS
    lines = _lines(capsys)
    assert lines[0].startswith('FBD,Size,Nb class,Avg.')
    assert lines[1].split(',')[1] == '44'


def test_dedup_against_ground_truth_and_reference(generated, capsys):
    assert run(['dedup', '--corpus', str(generated), '--jobs', '1', '--oracle',
                '--ground-truth', str(generated / 'ground_truth.tsv')]) == EXIT_SUCCESS
    fields = _fields(_lines(capsys))
    assert fields['precision'] == '1.0000'
    assert fields['recall'] == '1.0000'
    assert fields['cross-key-leakage'] == '0'
    assert fields['oracle-disagreements'] == '0'


def test_dedup_reports_are_reproducible(tmp_path, generated, capsys):
    reports = []
    for jobs in ['1', '1', '2']:
        path = tmp_path / f"report-{len(reports)}.tsv"
        assert run(['dedup', '--corpus', str(generated), '--jobs', jobs, '--report', str(path)]) == EXIT_SUCCESS
        reports.append(path.read_text(encoding='utf-8').splitlines()[:-1])
    assert reports[0] == reports[1] == reports[2]
    assert DuplicateReport.load_file(str(tmp_path / "report-0.tsv")).nb_duplicate_groups == 4


def test_identify_worked_example(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "fig.sig").write_text(open(EXAMPLE_SIGNATURE_FILE, encoding='utf-8').read(), encoding='utf-8')
    table_path = tmp_path / "table.tsv"
    assert run(['index', '--corpus', str(corpus), '--table', str(table_path), '--jobs', '1']) == EXIT_SUCCESS
    assert ClusterTable.load_file(str(table_path)).lookup(EXAMPLE_KEY) == ['fig']
    capsys.readouterr()

    assert run(['identify', '--query', EXAMPLE_SIGNATURE_FILE, '--table', str(table_path),
                '--corpus', str(corpus)]) == EXIT_SUCCESS
    lines = _lines(capsys)
    assert lines[0] == 'fig\t100.0000\tmatch'
    assert lines[-1] == 'penetration\t1.000000'


def test_oracle_cap_exceeded(generated, capsys):
    assert run(['oracle', '--corpus', str(generated), '--cap', '10']) == EXIT_CAP_EXCEEDED
    assert 'cap' in capsys.readouterr().err


def test_oracle_groups(generated, capsys):
    assert run(['oracle', '--corpus', str(generated)]) == EXIT_SUCCESS
    fields = _fields(_lines(capsys))
    assert fields['duplicate-groups'] == '4'
    assert fields['groups'] == '40'


def test_index_empty_corpus_is_a_data_error(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert run(['index', '--corpus', str(empty), '--table', str(tmp_path / "t.tsv"), '--jobs', '1']) \
        == EXIT_DATA_ERROR


def test_record_id_with_separator_is_a_data_error(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a,b.sig").write_text(open(EXAMPLE_SIGNATURE_FILE, encoding='utf-8').read(), encoding='utf-8')
    report_path = tmp_path / "report.tsv"
    assert run(['dedup', '--corpus', str(corpus), '--jobs', '1', '--report', str(report_path)]) == EXIT_DATA_ERROR
    assert 'forbidden character' in capsys.readouterr().err
    assert not report_path.exists()


def test_malformed_signature_is_a_data_error(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "bad.sig").write_text("1;2;3\n", encoding='utf-8')
    assert run(['index', '--corpus', str(corpus), '--table', str(tmp_path / "t.tsv"), '--jobs', '1']) \
        == EXIT_DATA_ERROR
    assert 'line 1' in capsys.readouterr().err
