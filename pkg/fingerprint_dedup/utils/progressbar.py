#
# Copyright 2026 fingerprint-dedup developers
#
# ### MIT license
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#
"""Progressbar"""

import logging

from contextlib import AbstractContextManager

logger = logging.getLogger(__name__)


class ProgressBar(AbstractContextManager):
    """Mimics click.progressbar. Reports progress as log messages.

    A message is emitted whenever the completed fraction advances by at
    least ``granularity``, and once on entry."""
    def __init__(self, length=None, label=None, granularity=0.1):
        self._item_show_func = None
        self._label_template = '{label:}'
        self._label_item_template = '{label:} ({item:})'
        self._label = label
        self._length = length
        self._granularity = granularity
        self._step = 0
        self._reported_fraction = 0.0

    def __enter__(self):
        self._report(0.0)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None and self._length:
            self._report(self.fraction, force=self._reported_fraction != self.fraction)
        return

    @property
    def label(self):
        return self._label

    @label.setter
    def label(self, label):
        self._label = label

    @property
    def item_show_func(self):
        return self._item_show_func

    @item_show_func.setter
    def item_show_func(self, item_show_func):
        self._item_show_func = item_show_func

    @property
    def step(self):
        return self._step

    @property
    def fraction(self):
        if not self._length:
            return 0.0
        return min(1.0, float(self._step) / float(self._length))

    def update(self, step):
        self._step += step
        fraction = self.fraction
        if fraction - self._reported_fraction >= self._granularity:
            self._report(fraction)

    def _text(self):
        if self._label is not None and self._item_show_func is not None:
            return self._label_item_template.format(
                label=self._label, item=self._item_show_func(self._step))
        if self._label is not None:
            return self._label_template.format(label=self._label)
        return None

    def _report(self, fraction, force=True):
        if not force:
            return
        self._reported_fraction = fraction
        text = self._text()
        if text is not None:
            logger.info("%s: %d/%s, progress fraction %.2f", text, self._step, self._length, fraction)
        else:
            logger.info("Progress fraction %.2f", fraction)
