# gunicorn -c gunicorn_conf.py vilenkin_lab.main:app
import multiprocessing

bind = "0.0.0.0:8000"
workers = min(2, multiprocessing.cpu_count())
worker_class = "uvicorn.workers.UvicornWorker"
loglevel = "info"
timeout = 120
