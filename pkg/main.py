from app.cli import run

if __name__ in {"__main__", "__mp_main__"}:
    raise SystemExit(run())
