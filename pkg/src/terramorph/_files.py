"""Atomic file writing: no partial outputs survive a failed stage."""

import os
import tempfile


def atomic_write(path, writer, mode="w", **open_kwargs):
    """Write a file via a temp file + rename so failures leave nothing behind.

    ``writer`` receives the open file object. Text mode defaults to UTF-8
    with LF line endings.
    """
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    if "b" not in mode:
        open_kwargs.setdefault("encoding", "utf-8")
        open_kwargs.setdefault("newline", "")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, mode, **open_kwargs) as handle:
            writer(handle)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
