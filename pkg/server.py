#!/usr/bin/env python3
"""Server entrypoint for the modva JSON API."""

import os

import uvicorn

import config


def main():
    workers = config.DEFAULT_WORKERS
    if config.DEFAULT_RELOAD and workers > 1:
        workers = 1
    log_level = os.environ.get("LOG_LEVEL", "info")
    uvicorn.run("app:app", host=config.DEFAULT_HOST, port=config.DEFAULT_PORT, workers=workers,
                reload=config.DEFAULT_RELOAD, log_level=log_level)


if __name__ == "__main__":
    main()
