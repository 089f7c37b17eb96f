#!/usr/bin/env python3
"""
CLI расчётов расщепления тепловых квантов.

Запуск:
    uv run python main.py run config/scenarios/ep_ln_vs_nbar.yml --out results
    uv run python main.py list-scenarios
    uv run python main.py clean-cache
"""
import argparse
import logging
import sys
from typing import List, Optional

from config import config
from modules.core.app import EXIT_CONFIG, ExperimentApp

# Настройка логирования
logging.basicConfig(
    level=getattr(logging, config.log_level.upper(), logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.StreamHandler(sys.stdout),
    ]
)

if config.log_file:
    file_handler = logging.FileHandler(config.log_file, encoding="utf-8")
    file_handler.setFormatter(logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    ))
    logging.getLogger().addHandler(file_handler)

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Запутанность и сжатие при расщеплении тепловых квантов",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="посчитать сценарий и записать таблицы")
    run.add_argument("scenario", help="файл сценария или id встроенного сценария")
    run.add_argument("--out", default=None, help=f"каталог результатов (по умолчанию {config.output_dir})")
    run.add_argument("--plots", action="store_true", help="записать SVG-графики")
    run.add_argument("--threads", type=int, default=None, help="число потоков для точек перебора")
    run.add_argument("--log-base", choices=["2", "e"], default=None, help="основание логарифма LN и EP")
    run.add_argument("--dims", default=None, help="размерности мод через запятую, например 4,8,8")
    run.add_argument("--no-cache", action="store_true", help="не читать и не писать кэш серий")

    commands.add_parser("list-scenarios", help="встроенные сценарии")
    commands.add_parser("clean-cache", help="очистить кэш серий")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Точка входа приложения."""
    args = build_parser().parse_args(argv)

    try:
        config.validate()
    except ValueError as e:
        logger.error("Ошибка конфигурации: %s", e)
        return EXIT_CONFIG

    app = ExperimentApp()
    if args.command == "list-scenarios":
        return app.list_scenarios()
    if args.command == "clean-cache":
        return app.clean_cache()

    logger.info("=" * 50)
    logger.info("Сценарий %s", args.scenario)
    logger.info("=" * 50)
    code = app.run(
        args.scenario,
        out_dir=args.out,
        plots=args.plots,
        threads=args.threads,
        log_base=args.log_base,
        dims=args.dims,
        use_cache=not args.no_cache,
    )
    logger.info("Завершено с кодом %d", code)
    return code


if __name__ == "__main__":
    sys.exit(main())
