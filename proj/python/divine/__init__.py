# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Data valuation, diverse subset selection, and removal."""

try:
    from ._divine import *  # noqa: F401,F403
    from ._divine import __doc__  # noqa: F401
except ImportError:
    # Plain CMake builds leave the extension next to the build tree rather
    # than inside the package; fall back to a top-level import.
    from _divine import *  # noqa: F401,F403
    from _divine import __doc__  # noqa: F401
