# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hourly dispatch loop. Mirrors ``_dispatch_py`` operation for operation."""

from libc.math cimport fmin, fmax


def dispatch_totals(const double[::1] pv_unit, double n_pv, const double[::1] load,
                    double soc_max, double soc_min, double charge_eff, double discharge_eff,
                    double max_charge, double max_discharge):
    cdef Py_ssize_t t, n = load.shape[0]
    cdef double soc = soc_max, net, charge, need, deliverable, drawn
    cdef double total_deficit = 0.0, throughput = 0.0
    if pv_unit.shape[0] != n:
        raise ValueError("pv_unit and load lengths differ")
    with nogil:
        for t in range(n):
            net = n_pv * pv_unit[t] - load[t]
            if net >= 0.0:
                charge = fmin(fmin(net * charge_eff, soc_max - soc), max_charge)
                soc = fmin(soc + charge, soc_max)
            else:
                need = -net
                deliverable = fmin(fmin(need, (soc - soc_min) * discharge_eff), max_discharge)
                drawn = deliverable / discharge_eff
                soc = fmax(soc - drawn, soc_min)
                total_deficit += need - deliverable
                throughput += drawn
    return total_deficit, throughput


def dispatch_trace(const double[::1] pv_unit, double n_pv, const double[::1] load,
                   double soc_max, double soc_min, double charge_eff, double discharge_eff,
                   double max_charge, double max_discharge,
                   double[::1] soc_out, double[::1] deficit_out, double[::1] dumped_out,
                   double[::1] charged_out, double[::1] delivered_out):
    cdef Py_ssize_t t, n = load.shape[0]
    cdef double soc = soc_max, net, charge, need, deliverable, drawn, deficit
    cdef double total_deficit = 0.0, throughput = 0.0
    if pv_unit.shape[0] != n:
        raise ValueError("pv_unit and load lengths differ")
    for buf in (soc_out, deficit_out, dumped_out, charged_out, delivered_out):
        if buf.shape[0] != n:
            raise ValueError("output buffer length differs from load")
    with nogil:
        for t in range(n):
            net = n_pv * pv_unit[t] - load[t]
            if net >= 0.0:
                charge = fmin(fmin(net * charge_eff, soc_max - soc), max_charge)
                soc = fmin(soc + charge, soc_max)
                charged_out[t] = charge
                dumped_out[t] = net - charge / charge_eff
                delivered_out[t] = 0.0
                deficit_out[t] = 0.0
            else:
                need = -net
                deliverable = fmin(fmin(need, (soc - soc_min) * discharge_eff), max_discharge)
                drawn = deliverable / discharge_eff
                soc = fmax(soc - drawn, soc_min)
                deficit = need - deliverable
                total_deficit += deficit
                throughput += drawn
                charged_out[t] = 0.0
                dumped_out[t] = 0.0
                delivered_out[t] = deliverable
                deficit_out[t] = deficit
            soc_out[t] = soc
    return total_deficit, throughput
