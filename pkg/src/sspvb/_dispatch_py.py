"""Pure-Python hourly dispatch loop. Reference twin of ``_dispatch.pyx``.

Both implementations must perform the same floating-point operations in the
same order so that results agree bit for bit across backends.
"""


def _floats(seq):
    # numpy scalars are an order of magnitude slower than floats in this loop
    return seq.tolist() if hasattr(seq, "tolist") else [float(v) for v in seq]


def dispatch_totals(pv_unit, n_pv, load, soc_max, soc_min,
                    charge_eff, discharge_eff, max_charge, max_discharge):
    """Run the load-following dispatch and return (total_deficit, throughput)."""
    pv_unit, load = _floats(pv_unit), _floats(load)
    n_pv = float(n_pv)
    if len(pv_unit) != len(load):
        raise ValueError("pv_unit and load lengths differ")
    soc = soc_max
    total_deficit = 0.0
    throughput = 0.0
    for t in range(len(load)):
        net = n_pv * pv_unit[t] - load[t]
        if net >= 0.0:
            charge = min(net * charge_eff, soc_max - soc, max_charge)
            soc = min(soc + charge, soc_max)
        else:
            need = -net
            deliverable = min(need, (soc - soc_min) * discharge_eff, max_discharge)
            drawn = deliverable / discharge_eff
            soc = max(soc - drawn, soc_min)
            total_deficit += need - deliverable
            throughput += drawn
    return total_deficit, throughput


def dispatch_trace(pv_unit, n_pv, load, soc_max, soc_min,
                   charge_eff, discharge_eff, max_charge, max_discharge,
                   soc_out, deficit_out, dumped_out, charged_out, delivered_out):
    """Same as :func:`dispatch_totals` but records every hour into the output buffers."""
    pv_unit, load = _floats(pv_unit), _floats(load)
    n_pv = float(n_pv)
    if len(pv_unit) != len(load):
        raise ValueError("pv_unit and load lengths differ")
    soc = soc_max
    total_deficit = 0.0
    throughput = 0.0
    for t in range(len(load)):
        net = n_pv * pv_unit[t] - load[t]
        if net >= 0.0:
            charge = min(net * charge_eff, soc_max - soc, max_charge)
            soc = min(soc + charge, soc_max)
            charged_out[t] = charge
            dumped_out[t] = net - charge / charge_eff
            delivered_out[t] = 0.0
            deficit_out[t] = 0.0
        else:
            need = -net
            deliverable = min(need, (soc - soc_min) * discharge_eff, max_discharge)
            drawn = deliverable / discharge_eff
            soc = max(soc - drawn, soc_min)
            deficit = need - deliverable
            total_deficit += deficit
            throughput += drawn
            charged_out[t] = 0.0
            dumped_out[t] = 0.0
            delivered_out[t] = deliverable
            deficit_out[t] = deficit
        soc_out[t] = soc
    return total_deficit, throughput
