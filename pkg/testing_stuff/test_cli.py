# testing_stuff/test_cli.py

import json
import logging

import numpy as np
import pytest

from cli.app import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from cli.system_file import dump_system, load_system_file, spec_to_dict, system_file_from_dict
from topology.errors import SystemFileError
from topology.structural import check_dd_observability

UNOBSERVABLE = {'n': 2, 'm': 1, 'a': [[0, 0], [0, 0]], 'c': [[1, 0]], 'comm': [[1]]}


def run_json(capsys, *argv):
    code = main([*argv, '--json'])
    return code, json.loads(capsys.readouterr().out)


def write(tmp_path, name, data) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding='utf-8')
    return str(path)


def link_pairs(section):
    return sorted([link['transmitter'], link['receiver']] for link in section['added_links'])


# ── System files ──────────────────────────────────────────────────────────────

def test_edge_list_format_is_one_based():
    sf = system_file_from_dict({
        'n': 2, 'm': 1,
        'a': {'format': 'edges', 'edges': [[1, 2]]},
        'c': {'format': 'edges', 'edges': [[2, 1]]},
        'comm': [[1]],
    })
    assert sf.spec.a_pattern.nonzeros == frozenset({(1, 0)})
    assert sf.spec.c_pattern.nonzeros == frozenset({(0, 1)})
    assert sf.cost_unit_label == 'c'


@pytest.mark.parametrize('patch, message', [
    ({'schema_version': '2'}, 'schema_version'),
    ({'n': -1}, '"n"'),
    ({'comm': [[2]]}, 'must be 0 or 1'),
    ({'c': [[1]]}, 'row 1 has 1 entries'),
    ({'a': {'format': 'edges', 'edges': [[1, 3]]}}, 'out of range'),
    ({'seed': 'seven'}, 'seed'),
    ({'cost_unit': 0}, 'cost_unit'),
])
def test_bad_system_files_are_rejected(patch, message):
    data = {'n': 2, 'm': 1, 'a': [[0, 1], [0, 0]], 'c': [[1, 0]], 'comm': [[1]]}
    data.update(patch)
    with pytest.raises(SystemFileError, match=message):
        system_file_from_dict(data)


def test_costs_scaled_by_unit():
    sf = system_file_from_dict({
        'n': 1, 'm': 2, 'a': [[0]], 'c': [[1], [1]],
        'comm': [[1, 0], [0, 1]], 'costs': [[0, 2], [2, 0]], 'cost_unit': 2.5,
    })
    assert sf.spec.costs.tolist() == [[0.0, 5.0], [5.0, 0.0]]


def test_brain_costs_on_existing_links_are_zeroed(caplog, fixtures_dir):
    with caplog.at_level(logging.WARNING):
        sf = load_system_file(fixtures_dir / 'brain.json')
    assert 'Cost zeroed' in caplog.text
    assert sf.spec.costs[0, 4] == 0.0
    assert sf.spec.costs[3, 1] == 3.0


def test_written_system_reads_back(brain, tmp_path):
    path = dump_system(tmp_path / 'brain_copy.json', brain.spec, name='copy', cost_unit=1.0, seed=4)
    again = load_system_file(path)
    assert again.name == 'copy'
    assert again.seed == 4
    assert again.spec.a_pattern == brain.spec.a_pattern
    assert again.spec.comm.edges == brain.spec.comm.edges
    assert np.array_equal(again.spec.costs, brain.spec.costs)

    data = spec_to_dict(brain.spec)
    assert 'expected' not in data
    assert all(isinstance(v, int) for row in data['a'] for v in row)


def same_values(left, right) -> bool:
    if left is None or right is None:
        return left is None and right is None
    return np.allclose(left, right, rtol=1e-12, atol=0.0)


@pytest.mark.parametrize('fixture', ['fig1', 'fig1_gstar', 'brain', 'identity_complete', 'single'])
def test_every_fixture_reads_back_after_writing(fixture, tmp_path, fixtures_dir):
    sf = load_system_file(fixtures_dir / f'{fixture}.json')
    path = dump_system(tmp_path / f'{fixture}.json', sf.spec, name=sf.name, cost_unit=sf.cost_unit,
                       cost_unit_label=sf.cost_unit_label, seed=sf.seed)
    again = load_system_file(path)

    assert (again.spec.n, again.spec.m) == (sf.spec.n, sf.spec.m)
    assert again.spec.a_pattern == sf.spec.a_pattern
    assert again.spec.c_pattern == sf.spec.c_pattern
    assert again.spec.comm.edges == sf.spec.comm.edges
    for key in ('costs', 'a_values', 'c_values', 'w_values'):
        assert same_values(getattr(again.spec, key), getattr(sf.spec, key)), key
    assert again.cost_unit_label == sf.cost_unit_label
    assert again.seed == sf.seed


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(SystemFileError, match='not found'):
        load_system_file(tmp_path / 'nope.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"n": 1,', encoding='utf-8')
    with pytest.raises(SystemFileError, match='not valid JSON'):
        load_system_file(broken)


# ── check ─────────────────────────────────────────────────────────────────────

def test_check_fig1(capsys, fixtures_dir):
    code, report = run_json(capsys, 'check', str(fixtures_dir / 'fig1.json'))
    assert code == EXIT_FAILED
    assert report['structural']['observable'] is True
    assert report['dd']['overall_ok'] is False
    assert report['dd']['per_sensor'][0]['deficit_links'] == [4]


def test_check_fig1_first_two_sensors(capsys, fixtures_dir):
    _, report = run_json(capsys, 'check', str(fixtures_dir / 'fig1.json'), '--sensors', '1,2')
    subset = report['structural_subset']
    assert subset['sensors'] == [1, 2]
    assert subset['observable'] is False


def test_check_observable_system(capsys, fixtures_dir):
    assert main(['check', str(fixtures_dir / 'identity_complete.json')]) == EXIT_OK
    assert 'DD observable: True' in capsys.readouterr().out


@pytest.mark.parametrize('sensors', ['1,x', '9'])
def test_check_bad_sensor_list(sensors, fixtures_dir):
    assert main(['check', str(fixtures_dir / 'fig1.json'), '--sensors', sensors]) == EXIT_INPUT


def test_check_unobservable_plant(capsys, tmp_path):
    code, report = run_json(capsys, 'check', write(tmp_path, 'bad.json', UNOBSERVABLE))
    assert code == EXIT_FAILED
    assert report['dd']['reason'] == 'plant unobservable'
    assert report['structural']['unreached'] == [2]


def test_input_errors_exit_2(tmp_path, fixtures_dir):
    assert main(['check', str(tmp_path / 'missing.json')]) == EXIT_INPUT
    no_loop = dict(UNOBSERVABLE, comm=[[0]])
    assert main(['check', write(tmp_path, 'noloop.json', no_loop)]) == EXIT_INPUT
    assert main(['augment', str(fixtures_dir / 'fig1.json'), '--mode', 'cost',
                 '--system-out', str(tmp_path / 'x.json')]) == EXIT_INPUT


def test_unknown_demo_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(['demo', 'nope'])
    assert exc.value.code == 2


# ── augment ───────────────────────────────────────────────────────────────────

def test_augment_fig1(capsys, tmp_path, fixtures_dir, fig1):
    out = tmp_path / 'fig1_gstar.json'
    code, report = run_json(capsys, 'augment', str(fixtures_dir / 'fig1.json'), '--system-out', str(out))
    assert code == EXIT_OK
    aug = report['augmentation']
    assert link_pairs(aug) == [[4, 1], [4, 2]]
    assert aug['total_links'] == 2
    assert aug['final_comm'] == fig1.expected['final_comm']
    assert aug['independent_total_links'] >= 2
    assert report['initial_dd']['overall_ok'] is False
    assert report['system_out'] == 'fig1_gstar.json'

    written = load_system_file(out)
    assert check_dd_observability(written.spec).overall_ok
    assert main(['check', str(out)]) == EXIT_OK


def test_augment_brain_cost_mode(capsys, tmp_path, fixtures_dir, brain):
    code, report = run_json(capsys, 'augment', str(fixtures_dir / 'brain.json'), '--mode', 'cost',
                            '--system-out', str(tmp_path / 'brain_gstar.json'))
    assert code == EXIT_OK
    aug = report['augmentation']
    assert link_pairs(aug) == [[2, 4]]
    assert aug['total_cost'] == 3.0
    assert aug['cost_unit_label'] == 'c'
    assert aug['final_comm'] == brain.expected['final_comm']


def test_augment_text_report(capsys, tmp_path, fixtures_dir):
    main(['augment', str(fixtures_dir / 'fig1.json'), '--system-out', str(tmp_path / 'g.json')])
    text = capsys.readouterr().out
    assert 'sensor 4 -> sensor 1' in text
    assert 'sensor 4 -> sensor 2' in text
    assert 'Links added: 2' in text


def test_augment_default_output_goes_to_working_directory(monkeypatch, tmp_path, fixtures_dir):
    monkeypatch.chdir(tmp_path)
    assert main(['augment', str(fixtures_dir / 'identity_complete.json')]) == EXIT_OK
    assert (tmp_path / 'identity_complete_augmented.json').exists()


def test_augment_unobservable_plant(capsys, tmp_path):
    code, report = run_json(capsys, 'augment', write(tmp_path, 'bad.json', UNOBSERVABLE),
                            '--system-out', str(tmp_path / 'out.json'))
    assert code == EXIT_FAILED
    assert report['augmentation']['error'].startswith('plant unobservable')
    assert report['augmentation']['added_links'] == []
    assert not (tmp_path / 'out.json').exists()
    assert 'numeric' not in report


@pytest.mark.parametrize('fixture, extra', [
    ('fig1.json', []),
    ('brain.json', ['--mode', 'cost']),
    ('identity_complete.json', []),
])
def test_augment_numeric_section_present_iff_dd_observable(capsys, tmp_path, fixtures_dir, fixture, extra):
    _, report = run_json(capsys, 'augment', str(fixtures_dir / fixture), *extra,
                         '--system-out', str(tmp_path / 'g.json'))
    assert report['dd']['overall_ok'] is True
    assert ('numeric' in report) == report['dd']['overall_ok']
    assert report['numeric']['seed'] == report['provenance']['seed']
    assert report['numeric']['trials']


def test_augment_text_report_shows_numeric_check(capsys, tmp_path, fixtures_dir):
    main(['augment', str(fixtures_dir / 'fig1.json'), '--system-out', str(tmp_path / 'g.json')])
    assert 'Numerically observable:' in capsys.readouterr().out


def test_reports_are_byte_identical(tmp_path, fixtures_dir):
    outputs = []
    for k in range(2):
        out = tmp_path / f'report{k}.json'
        main(['augment', str(fixtures_dir / 'fig1.json'), '--json', '--out', str(out),
              '--system-out', str(tmp_path / 'g.json')])
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


# ── verify ────────────────────────────────────────────────────────────────────

def test_verify_single(capsys, fixtures_dir):
    code, report = run_json(capsys, 'verify', str(fixtures_dir / 'single.json'), '--seed', '3', '--trials', '2')
    assert code == EXIT_OK
    assert report['numeric']['observable'] is True
    assert report['numeric']['passing_trials'] == 2
    assert report['provenance']['seed'] == 3


def test_verify_fig1_gstar_with_pinned_w(capsys, fixtures_dir):
    code, report = run_json(capsys, 'verify', str(fixtures_dir / 'fig1_gstar.json'), '--seed', '7')
    assert code == EXIT_OK
    trial = report['numeric']['trials'][0]
    assert trial['w_source'] == 'pinned'
    assert len(trial['sensors']) == 4
    assert all(s['observable'] for s in trial['sensors'])
    assert max(s['relative_error'] for s in trial['sensors']) < 1e-6


def test_verify_seed_falls_back_to_environment(capsys, monkeypatch, tmp_path, single):
    path = dump_system(tmp_path / 'unseeded.json', single.spec)
    monkeypatch.setenv('NETOBS_SEED', '11')
    _, report = run_json(capsys, 'verify', str(path))
    assert report['provenance']['seed'] == 11

    monkeypatch.setenv('NETOBS_SEED', 'eleven')
    assert main(['verify', str(path)]) == EXIT_INPUT


def test_verify_file_seed_beats_environment(capsys, monkeypatch, fixtures_dir):
    monkeypatch.setenv('NETOBS_SEED', '11')
    _, report = run_json(capsys, 'verify', str(fixtures_dir / 'single.json'))
    assert report['provenance']['seed'] == 0


def test_verify_tolerance_from_environment(capsys, monkeypatch, fixtures_dir):
    monkeypatch.setenv('NETOBS_TOL', '1e-6')
    _, report = run_json(capsys, 'verify', str(fixtures_dir / 'single.json'))
    assert report['numeric']['tol'] == 1e-6


# ── demo ──────────────────────────────────────────────────────────────────────

@pytest.mark.parametrize('name', ['fig1', 'brain'])
def test_demos_pass(capsys, name):
    code, report = run_json(capsys, 'demo', name)
    assert code == EXIT_OK
    assert report['demo']['passed'] is True
    assert report['demo']['mismatches'] == []


def test_demo_text(capsys):
    assert main(['demo', 'fig1']) == EXIT_OK
    assert 'Demo fig1: PASS' in capsys.readouterr().out
