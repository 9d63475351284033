import os

# Settings are read once at import; app.py calls load_dotenv() before importing core.


def _int_env(name: str, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        print(f"[Config] Ignoring non-integer {name}={raw!r}")
        return default


# Worker threads for cell checks; 1 keeps everything in the calling thread.
THREADS = max(1, _int_env("TWISTKIT_THREADS", 1))

# "q" for the rationals or "fp:P" for the prime field with P elements
DEFAULT_FIELD = os.getenv("TWISTKIT_FIELD", "q")

# Word-length window for A-infinity commands; None means arity bound + 3
MAX_WORD = _int_env("TWISTKIT_MAX_WORD", None)

LOG_MAX = max(1, _int_env("TWISTKIT_LOG_MAX", 300))

SEED = _int_env("TWISTKIT_SEED", 0)
