# -*- coding: utf-8 -*-
"""
    crtrack.tests.test_cli
    ~~~~~~~~~~~~~~~~~~~~~~

    Tests for cli.py

    :copyright: (c) 2026 by the crtrack authors.
    :license: MIT, see LICENSE for more details.
"""

import pytest

from crtrack.cli import parse_args


class TestParseArgs(object):
    def test_no_arguments(self, capsys):
        with pytest.raises(SystemExit) as e:
            parse_args([])
        assert e.value.code == 1
        assert "usage: crtrack" in capsys.readouterr().out

    def test_version(self, run, capsys):
        run("-V")
        assert capsys.readouterr().out.strip() != ""

    @pytest.mark.parametrize('command', [
        'track', 'eval', 'augment', 'synth', 'asa', 'ssl-loss', 'anu-sim',
        'ablate'
    ])
    def test_subcommands_registered(self, command, capsys):
        with pytest.raises(SystemExit) as e:
            parse_args([command, '--help'])
        assert e.value.code == 0
        assert f"crtrack {command}" in capsys.readouterr().out

    def test_track_flags(self):
        args = parse_args(['track', '--det', 'det.txt', '-o', 'out.txt',
                           '--no-appearance', '--similarity', 'product'])
        assert args['no_appearance'] is True
        assert args['similarity'] == 'product'
        assert args['no_oru'] is False
        assert args['seed'] == 0
        assert args['file'] is None

    def test_track_needs_one_source(self):
        with pytest.raises(SystemExit):
            parse_args(['track', '-o', 'out.txt'])
        with pytest.raises(SystemExit):
            parse_args(['track', '--det', 'a', '--root', 'b', '-o', 'c'])

    def test_verbosity(self):
        assert parse_args(['-vv', 'synth', 'x'])['verbose'] == 2


class TestErrors(object):
    def test_missing_input(self, run, tmp_path, capsys):
        with pytest.raises(SystemExit) as e:
            run("track", "--det", tmp_path / "missing.txt", "-o",
                tmp_path / "out.txt")
        assert e.value.code == 1
        assert "crtrack: error:" in capsys.readouterr().err

    def test_missing_config(self, run, tmp_path, capsys):
        with pytest.raises(SystemExit) as e:
            run("synth", tmp_path, "-f", tmp_path / "none.conf")
        assert e.value.code == 1
        assert "does not exist" in capsys.readouterr().err

    def test_malformed_input(self, run, tmp_path, capsys):
        det = tmp_path / "det.txt"
        det.write_text("1,-1,10,10,5,5,0.9\nnot a line\n")
        with pytest.raises(SystemExit) as e:
            run("track", "--det", det, "-o", tmp_path / "out.txt")
        assert e.value.code == 1
        assert "bad line(s) 2" in capsys.readouterr().err

    def test_keep_rate_out_of_range(self, run, fixture, capsys):
        with pytest.raises(SystemExit) as e:
            run("anu-sim", fixture("trace_params.txt"), "-m", 1.5)
        assert e.value.code == 1
        err = capsys.readouterr().err
        assert "crtrack: error:" in err and "keep rate" in err

    @pytest.mark.parametrize('argv', [
        ['ablate', 'out', '-n', '0'], ['synth', 'out', '--frames', '-3'],
        ['ablate', 'out', '--objects', 'many'],
    ])
    def test_counts_must_be_positive(self, argv, capsys):
        with pytest.raises(SystemExit) as e:
            parse_args(argv)
        assert e.value.code == 2
        err = capsys.readouterr().err
        assert "must be >= 1" in err or "not an integer" in err
