import logging

from flask import Flask
from werkzeug.middleware.proxy_fix import ProxyFix

import paradigm_io
from environment_config import get_environment_config

config = get_environment_config()
logging.basicConfig(level=config.log_level, format='%(asctime)s %(levelname)s %(message)s')

# Create the app
app = Flask(__name__)
app.config['GEOMORPH_ENV'] = config.environment
app.json.ensure_ascii = False
app.wsgi_app = ProxyFix(app.wsgi_app, x_proto=1, x_host=1)

# Import routes after app initialization
from routes import *  # noqa: E402,F401,F403


# Health check endpoint for deployment
@app.route('/health')
def health_check():
    """Health check endpoint for deployment monitoring"""
    try:
        fixtures = paradigm_io.list_fixtures()
        return {'status': 'healthy', 'fixtures': len(fixtures)}, 200
    except Exception as e:
        return {'status': 'unhealthy', 'error': str(e)}, 500


if __name__ == '__main__':
    app.run(host='0.0.0.0', port=config.port, debug=config.is_development)
