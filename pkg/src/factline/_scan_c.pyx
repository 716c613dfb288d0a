# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scanner for the bracketed fact syntax.

Hand-rolled equivalent of the extraction regex in ``_scan_py``: the pattern
is deterministic (field classes exclude every structural character), so a
single left-to-right pass with no backtracking reproduces ``re.finditer``
exactly.  Any behavioural change here must be mirrored in ``_scan_py``.
"""


cdef inline bint _is_reserved(Py_UCS4 c):
    return (c == u'[' or c == u']' or c == u'(' or c == u')'
            or c == u'|' or c == u'#' or c == u'$')


def scan_facts(unicode text):
    """Return ``(start, end, f1..f7)`` for every fact-pattern match, in text order."""
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t j, start
    cdef Py_ssize_t fstart[7]
    cdef Py_ssize_t fend[7]
    cdef int fi, k
    cdef bint ok
    cdef Py_UCS4 expect

    out = []
    while i + 1 < n:
        if text[i] != u'[' or text[i + 1] != u'(':
            i += 1
            continue
        start = i
        j = i + 2
        fi = 0
        ok = True

        # subject group: field '#' field '#' field ')'
        for k in range(3):
            fstart[fi] = j
            while j < n and not _is_reserved(text[j]):
                j += 1
            fend[fi] = j
            fi += 1
            expect = u'#' if k < 2 else u')'
            if j >= n or text[j] != expect:
                ok = False
                break
            j += 1

        # spaces, '|', relation field, '|', spaces, '('
        if ok:
            while j < n and text[j] == u' ':
                j += 1
            if j >= n or text[j] != u'|':
                ok = False
        if ok:
            j += 1
            fstart[fi] = j
            while j < n and not _is_reserved(text[j]):
                j += 1
            fend[fi] = j
            fi += 1
            if j >= n or text[j] != u'|':
                ok = False
        if ok:
            j += 1
            while j < n and text[j] == u' ':
                j += 1
            if j >= n or text[j] != u'(':
                ok = False

        # object group: field '#' field '#' field ')'
        if ok:
            j += 1
            for k in range(3):
                fstart[fi] = j
                while j < n and not _is_reserved(text[j]):
                    j += 1
                fend[fi] = j
                fi += 1
                expect = u'#' if k < 2 else u')'
                if j >= n or text[j] != expect:
                    ok = False
                    break
                j += 1

        # closing ']'
        if ok and (j >= n or text[j] != u']'):
            ok = False

        if not ok:
            i = start + 1
            continue

        j += 1
        out.append((
            start, j,
            text[fstart[0]:fend[0]], text[fstart[1]:fend[1]], text[fstart[2]:fend[2]],
            text[fstart[3]:fend[3]],
            text[fstart[4]:fend[4]], text[fstart[5]:fend[5]], text[fstart[6]:fend[6]],
        ))
        i = j
    return out
