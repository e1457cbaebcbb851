"""
Acceptance runner

Runs the long 30-seed checks in tests/test_acceptance.py with pytest.
Expect this to take a while on a single core.
"""
import argparse
import os
import subprocess
import sys
from pathlib import Path

from rich.console import Console
from rich.panel import Panel

console = Console()

ROOT = Path(__file__).parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Run the slow fcpobench acceptance checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python scripts/run_acceptance.py
  python scripts/run_acceptance.py -k Twin
        """,
    )
    parser.add_argument("-k", dest="keyword", help="Only run tests matching this pytest expression")
    args = parser.parse_args()

    console.print(Panel.fit("[bold cyan]FCPOBENCH ACCEPTANCE[/bold cyan]", border_style="cyan", padding=(1, 2)))
    command = [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-v"]
    if args.keyword:
        command += ["-k", args.keyword]
    env = dict(os.environ, FCPOBENCH_SLOW="1")
    code = subprocess.call(command, cwd=ROOT, env=env)
    if code == 0:
        console.print("[green]✓ All acceptance checks passed[/green]")
    else:
        console.print(f"[red]✗ Acceptance checks failed (exit code {code})[/red]")
    return code


if __name__ == "__main__":
    sys.exit(main())
