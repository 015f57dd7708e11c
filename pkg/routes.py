from flask import jsonify, request

import paradigm_io
from app import app
from commands import COMMANDS, CommandOptions
from errors import GeomorphError


def _bundled(name):
    """Only bundled fixtures are reachable over HTTP, by exact name"""
    if name not in paradigm_io.list_fixtures():
        raise FileNotFoundError(f"no bundled fixture named '{name}'")
    return name


@app.errorhandler(GeomorphError)
def handle_geomorph_error(e):
    app.logger.warning(f"Request failed: {e}")
    return jsonify({'status': 'error', 'error': str(e)}), 400


@app.errorhandler(FileNotFoundError)
def handle_missing_fixture(e):
    return jsonify({'status': 'error', 'error': str(e)}), 404


@app.route('/fixtures')
def list_fixtures():
    return jsonify({'fixtures': paradigm_io.list_fixtures()})


@app.route('/fixtures/<name>')
def fixture_summary(name):
    """Parsed summary of one bundled paradigm file"""
    pf = paradigm_io.load(_bundled(name))
    return jsonify(pf.summary())


@app.route('/fixtures/<name>/<command>', methods=['POST'])
def run_command(name, command):
    """Run init/select/train/compose/rotate with options from the JSON body"""
    if command not in COMMANDS:
        return jsonify({'status': 'error', 'error': f"unknown command '{command}'"}), 404
    data = request.get_json(silent=True)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise GeomorphError("request body must be a JSON object of options")

    opts = CommandOptions.from_mapping(_bundled(name), data)
    report = COMMANDS[command](opts)
    app.logger.info(f"{command} {name}: {report.status}")
    return app.response_class(report.to_json(), mimetype='application/json')
