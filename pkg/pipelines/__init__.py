from .contextuality2bell_pipeline import Contextuality2BellPipeline

__all__ = ["Contextuality2BellPipeline"]
