# Gunicorn configuration for the geomorph JSON API
import os

wsgi_app = "wsgi:application"

# Server socket
bind = f"0.0.0.0:{os.environ.get('PORT', '5000')}"
backlog = 256

# Worker processes; requests are CPU bound numpy work
workers = int(os.environ.get("GEOMORPH_WEB_WORKERS", "2"))
worker_class = "sync"
timeout = 300  # 100-run rotation batches
graceful_timeout = 60
max_requests = 500
max_requests_jitter = 50

# Logging
accesslog = "-"
errorlog = "-"
loglevel = os.environ.get("GEOMORPH_LOG_LEVEL", "info").lower()
access_log_format = '%(h)s "%(r)s" %(s)s %(b)s %(D)sus'

proc_name = "geomorph"
daemon = False
pidfile = None

# Fixtures are parsed once in the master
preload_app = True


def when_ready(server):
    """Called just after the server is started"""
    server.log.info(f"geomorph ready on {bind} with {workers} workers")


def on_exit(server):
    """Called just before exiting gunicorn"""
    server.log.info("Shutting down: Master")
