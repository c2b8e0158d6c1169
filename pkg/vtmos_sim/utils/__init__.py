from vtmos_sim.utils.json_encoder import ResultJSONEncoder, dumps_result, loads_result

__all__ = ["ResultJSONEncoder", "dumps_result", "loads_result"]
