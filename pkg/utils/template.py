"""
Report rendering.

The verification report is a jinja2 template:
- a header with the seed
- one line per check: [PASS|FAIL] <id> <title> : <detail>
- a summary line
"""

from typing import Any, Dict, Optional

from jinja2 import Environment, StrictUndefined


REPORT_TEMPLATE = """\
# worm-bergman verification (seed {{ seed }})
{% for r in results -%}
[{{ 'PASS' if r.success else 'FAIL' }}] {{ r.check_id }} {{ r.title }} : {{ r.detail }}
{% endfor -%}
# {{ passed }}/{{ total }} checks passed
"""

_env = Environment(undefined=StrictUndefined, keep_trailing_newline=True)


def render_report(suite: Dict[str, Any], template: Optional[str] = None) -> str:
    """Render a SuiteResult.to_dict() payload as the text report."""
    tmpl = _env.from_string(template or REPORT_TEMPLATE)
    return tmpl.render(**suite)
