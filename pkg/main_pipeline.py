import asyncio
import logging
import os

import yaml

from pipelines.contextuality2bell_pipeline import Contextuality2BellPipeline
from tools.dataset_catalog import resolve_input


# SET YOUR OWN INPUT AND CONFIG HERE
# a catalog name (kcbs5, yuoh13, twin10) or a path to a projector-set JSON file
source = "kcbs5"
config_path = "configs/kcbs5.yaml"


async def main():
    with open(config_path, "r", encoding="utf-8") as f:
        level = (yaml.safe_load(f) or {}).get("log_level", "INFO")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(message)s")

    pipeline = Contextuality2BellPipeline.init_from_config(config_path=config_path)
    report = await pipeline(resolve_input(source), name=os.path.basename(source))
    print(report.render_table())


if __name__ == "__main__":
    asyncio.run(main())
