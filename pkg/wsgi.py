"""
WSGI entry point for production deployment
"""
import logging
import os
import sys

# Add the project directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

try:
    from app import app as application
    from startup import check_fixtures

    logging.info("Application loaded successfully")
    failures = check_fixtures()
    if failures:
        logging.warning(f"Fixture self-check failed for {', '.join(failures)} - serving anyway")

except Exception as e:
    logging.error(f"Failed to load application: {e}")
    raise

if __name__ == "__main__":
    application.run(host='0.0.0.0', port=int(os.environ.get('PORT', 5000)), debug=False)
