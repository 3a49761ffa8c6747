import os
import sys
import threading
import queue
import inspect
from datetime import datetime

# -----------------------------
# CONFIGURATION
# -----------------------------

ENABLE_FILE_LOGGING = False
LOG_DIR = "logs"
MAX_LOG_SIZE_BYTES = 1_000_000  # 1 MB per file before rotation
MSG_COUNTER = 0
DATE_STR = datetime.now().strftime("%Y-%m-%d_%H-%M")

# Log levels
LEVELS = {
    "DEBUG": 10,
    "INFO": 20,
    "WARN": 30,
    "ERROR": 40
}

# Terminal threshold; the CLI keeps this at WARN so stdout carries only results
PRINT_LEVEL = LEVELS["WARN"]
LOGGING_LEVEL = LEVELS["DEBUG"]
#-------------------------------------------------------------

LOG_FILES = {
    level: os.path.join(LOG_DIR, f"{DATE_STR}_{level.lower()}.log") for level in LEVELS
}

# Terminal Colors
COLORS = {
    "ERROR": "\033[91m",  # Red
    "WARN":  "\033[93m",  # Yellow
    "INFO":  "\033[92m",  # Green
    "DEBUG": "\033[94m",  # Blue
    "END":   "\033[0m"
}

# Thread-safe queue for async file logging
log_queue = queue.Queue()
_stop_event = threading.Event()
_worker_lock = threading.Lock()
_log_thread = None

# -----------------------------
# INTERNAL HELPERS
# -----------------------------

def _rotate_if_needed(log_file):
    """Rotate log file if it exceeds MAX_LOG_SIZE_BYTES."""
    if os.path.exists(log_file) and os.path.getsize(log_file) > MAX_LOG_SIZE_BYTES:
        base, ext = os.path.splitext(log_file)

        # Find next free rotated filename
        i = 1
        while True:
            rotated = f"{base}_{i}{ext}"
            if not os.path.exists(rotated):
                os.rename(log_file, rotated)
                break
            i += 1

def _async_log_worker():
    """Background thread that drains queued entries into the per-level files."""
    global MSG_COUNTER
    while not _stop_event.is_set() or not log_queue.empty():
        try:
            level, message = log_queue.get(timeout=0.5)
        except queue.Empty:
            continue

        log_file = LOG_FILES[level]
        try:
            os.makedirs(os.path.dirname(log_file) or ".", exist_ok=True)
            _rotate_if_needed(log_file)

            MSG_COUNTER += 1
            timestamp = datetime.now().strftime("%H:%M:%S")
            with open(log_file, "a") as f:
                f.write(f"{MSG_COUNTER:06d} [{timestamp}] [{level}] {message}\n")
        except OSError as e:
            # never let a full disk take the computation down with it
            print(f"[logger] cannot write {log_file}: {e}", file=sys.stderr)

def _ensure_worker():
    global _log_thread
    with _worker_lock:
        if _log_thread is None or not _log_thread.is_alive():
            _stop_event.clear()
            _log_thread = threading.Thread(target=_async_log_worker, daemon=True)
            _log_thread.start()

def _get_caller():
    """
    Return accurate caller even when the logging API is nested.
    """
    for frame in inspect.stack()[1:]:
        fname = os.path.basename(frame.filename)
        if fname != "logger.py":        # skip internal logger calls
            return f"{fname}:{frame.lineno}"

    return "unknown:0"

# -----------------------------
# PUBLIC SETTERS
# -----------------------------
def set_print_level(level):
    """Set the minimum level for terminal printing."""
    global PRINT_LEVEL
    level = str(level).upper()
    if level not in LEVELS:
        warn(f"Invalid print level: {level}. Keeping level {PRINT_LEVEL}")
        return
    PRINT_LEVEL = LEVELS[level]

def set_log_level(level):
    """Set the minimum level for file logging."""
    global LOGGING_LEVEL
    level = str(level).upper()
    if level not in LEVELS:
        warn(f"Invalid log level: {level}. Keeping level {LOGGING_LEVEL}")
        return
    LOGGING_LEVEL = LEVELS[level]

def set_max_file_size(size_bytes):
    """Set the maximum log file size before rotation."""
    global MAX_LOG_SIZE_BYTES
    if size_bytes <= 0:
        warn(f"Invalid max log size: {size_bytes}. Using default {MAX_LOG_SIZE_BYTES}")
        return
    MAX_LOG_SIZE_BYTES = size_bytes

def set_logs_dir(dir_path):
    """Set the directory where log files are stored (created on first write)."""
    global LOG_DIR
    if str(dir_path).strip() == "":
        warn(f"Invalid log directory path. Using default {LOG_DIR}")
        return
    LOG_DIR = str(dir_path)
    for level in LOG_FILES:
        LOG_FILES[level] = os.path.join(LOG_DIR, f"{DATE_STR}_{level.lower()}.log")

def set_file_logging_enabled(enabled):
    """Enable or disable logging to files."""
    global ENABLE_FILE_LOGGING
    ENABLE_FILE_LOGGING = bool(enabled)

def apply_config(log_config):
    """Apply a parsed logging section (see scan_cli.parse_log_config)."""
    set_print_level(log_config.get("print_level", "WARN"))
    set_log_level(log_config.get("log_level", "DEBUG"))
    set_logs_dir(log_config.get("log_dir", LOG_DIR))
    set_max_file_size(int(log_config.get("log_file_max_size_bytes", MAX_LOG_SIZE_BYTES)))
    set_file_logging_enabled(log_config.get("log_to_file", False))

# -----------------------------
# PUBLIC TRACE FUNCTION
# -----------------------------
def debug(message): trace("DEBUG", message)
def info(message): trace("INFO", message)
def warn(message): trace("WARN", message)
def error(message): trace("ERROR", message)

def trace(level, message):
    """
    Print to stderr (with colors) and store in log file (async).
    Includes filename + line number automatically.
    """
    level = level.upper()
    if level not in LEVELS:
        raise ValueError(f"Invalid log level: {level}")

    below_print = LEVELS[level] < PRINT_LEVEL
    below_file = not ENABLE_FILE_LOGGING or LEVELS[level] < LOGGING_LEVEL
    if below_print and below_file:
        return  # stack inspection is the expensive part; skip it

    context_msg = f"({_get_caller()}) {message}"

    if not below_print:
        color = COLORS[level]
        print(f"{color}[{level}] {context_msg}{COLORS['END']}", file=sys.stderr)

    if not below_file:
        _ensure_worker()
        log_queue.put((level, context_msg))

# -----------------------------
# CLEAN SHUTDOWN
# -----------------------------

def close_logger():
    """Flush and stop the file logging thread (call on shutdown)."""
    global _log_thread
    with _worker_lock:
        if _log_thread is None:
            return
        _stop_event.set()
        _log_thread.join(timeout=2)
        _log_thread = None
