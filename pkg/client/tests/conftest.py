"""Fixtures: a real service subprocess plus fault-injecting stub servers."""

from __future__ import annotations

import socket
import subprocess
import sys
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import httpx
import pytest


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="session")
def service_url():
    """A planverify service running in a subprocess for the whole session."""
    port = free_port()
    proc = subprocess.Popen(
        [
            sys.executable,
            "-c",
            "import uvicorn; from planverify.service import create_app; "
            f"uvicorn.run(create_app(), host='127.0.0.1', port={port}, log_level='error')",
        ],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    url = f"http://127.0.0.1:{port}"
    deadline = time.time() + 15
    while time.time() < deadline:
        try:
            if httpx.get(f"{url}/healthz", timeout=1.0).status_code == 200:
                break
        except httpx.TransportError:
            time.sleep(0.1)
    else:
        proc.terminate()
        raise RuntimeError("service did not come up")
    yield url
    proc.terminate()
    proc.wait(timeout=10)


class CountingHandler(BaseHTTPRequestHandler):
    """Always answers with the server's fixed status; counts every request."""

    def _respond(self):
        self.server.request_count += 1
        body = b'{"error": "stub"}'
        self.send_response(self.server.status_code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    do_GET = _respond
    do_POST = _respond

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    """Start a stub returning a fixed HTTP status; yields (url, server)."""
    servers = []

    def start(status_code: int):
        server = ThreadingHTTPServer(("127.0.0.1", 0), CountingHandler)
        server.status_code = status_code
        server.request_count = 0
        threading.Thread(target=server.serve_forever, daemon=True).start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_address[1]}", server

    yield start
    for server in servers:
        server.shutdown()
        server.server_close()


@pytest.fixture
def flaky_listener():
    """A socket that accepts and immediately drops connections, counting them."""
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    sock.listen(8)
    port = sock.getsockname()[1]
    counter = {"connections": 0}
    stop = threading.Event()

    def run():
        sock.settimeout(0.2)
        while not stop.is_set():
            try:
                conn, _ = sock.accept()
            except socket.timeout:
                continue
            counter["connections"] += 1
            conn.close()

    thread = threading.Thread(target=run, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}", counter
    stop.set()
    thread.join(timeout=2)
    sock.close()
