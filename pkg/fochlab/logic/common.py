# "fochlab" - A numerical laboratory for a fifth-order Camassa-Holm type
# equation.
# Copyright (C) 2026  The fochlab developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

""" Common utilities for the backend and the commands. """

import hashlib
import logging
import os
import os.path
import threading
from queue import Empty, Queue

log = logging.getLogger(__name__)

THREADS_VARIABLE = 'FOCH_LAB_THREADS'


def list_names(array, separator=', ', last_separator=' and '):
    """ Return a human readable listing of the elements.

    >>> list_names([6, 8, 10])
    "6, 8 and 10"
    >>> list_names(['u_form'])
    "u_form"

    An empty list gives an empty string.

    """
    names = [str(item) for item in array]
    if len(names) > 1:
        return separator.join(names[:-1]) + last_separator + names[-1]
    return ''.join(names)


def makedirs(file):
    """ Make the parent directories of a file path. """
    folder = os.path.dirname(file)
    if folder:
        os.makedirs(folder, exist_ok=True)


def checksum_file(file):
    """ MD5 checksum of a file.

    One parameter is accepted:
        file    The path of the file, or a file object opened in binary mode.

    """
    if isinstance(file, str):
        with open(file, 'rb') as opened:
            return checksum_file(opened)
    digest = hashlib.md5()
    for block in iter(lambda: file.read(1 << 16), b''):
        digest.update(block)
    return digest.hexdigest()


def thread_count(default=1):
    """ The worker count allowed by FOCH_LAB_THREADS, at least one. """
    value = os.environ.get(THREADS_VARIABLE)
    if value is None:
        return default
    try:
        return max(1, int(value))
    except ValueError:
        log.warning('Ignoring %s=%r, not an integer', THREADS_VARIABLE,
                    value)
        return default


def _attempt(work, position, item):
    try:
        return work(item)
    except Exception as err:
        log.error('Work item %d failed: %s', position, err)
        return err


def _worker(work, item_queue, result_queue):
    """ Take items from item_queue until it is empty, and push
    (position, result) pairs to result_queue. """
    while True:
        try:
            position, item = item_queue.get_nowait()
        except Empty:
            return
        try:
            result_queue.put((position, _attempt(work, position, item)))
        finally:
            item_queue.task_done()


def run_workers(items, work, workers=1):
    """ Apply work to every item on a pool of threads.

    The results come back in the order of items. An item whose work raised
    yields the exception in place of its result. A BaseException ends its
    thread instead; that item yields None and the other threads finish the
    queue.

    This function accepts up to three parameters:
        items        The items to process.
        work         A function of one item.
        workers=1    How many threads to start.

    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [_attempt(work, position, item)
                for position, item in enumerate(items)]

    item_queue = Queue()
    for position, item in enumerate(items):
        item_queue.put((position, item))
    result_queue = Queue(len(items))

    threads = list()
    for _ in range(min(workers, len(items))):
        thread = threading.Thread(target=_worker,
                                  args=(work, item_queue, result_queue))
        thread.daemon = True
        thread.start()
        threads.append(thread)

    # Wait for all items to be claimed
    item_queue.join()

    # Wait for all threads to finish
    for thread in threads:
        thread.join()

    results = [None] * len(items)
    while not result_queue.empty():
        position, result = result_queue.get()
        results[position] = result
    return results
