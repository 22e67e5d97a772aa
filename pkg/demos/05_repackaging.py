#!/usr/bin/env python3
"""Repackaging detection by certificate serial number.

A repackaged app keeps its package name but must be re-signed, and the
signing certificate's serial number cannot be forged without the original
key.  Comparing the serial against an official-serial database separates
originals from repacks exactly.
"""

from appgate.apkcheck import build_serial_db, parse_apk, repack_check
from appgate.apkcheck.fixtures import build_repack_corpus, make_signer, build_apk
from appgate.registry import RepackVerdict

print("one app, two signers:")
official = make_signer(0x706A633E, "official release key")
stranger = make_signer(0xDEADBEA7, "repackager key")
original = build_apk("com.demo.victim", "2.0", official)
repack = build_apk("com.demo.victim", "2.0", stranger, payload=b"\x00extra\x00")
a, b = parse_apk(original), parse_apk(repack)
print(f"  original : package={a.package_name} serial=0x{a.cert_serial:x}")
print(f"  repack   : package={b.package_name} serial=0x{b.cert_serial:x}")
print("  same identity, different serial -> detectable\n")

print("building a 200-pair corpus (same package, two signing keys)...")
originals, repacks = build_repack_corpus(200)
db = build_serial_db(originals)
print(f"official-serial database covers {len(db)} packages")

verdicts_orig = [repack_check(parse_apk(x), db) for x in originals]
verdicts_rep = [repack_check(parse_apk(x), db) for x in repacks]
print(f"originals passing : {sum(v is RepackVerdict.PASS for v in verdicts_orig)}/200")
print(f"repacks failing   : {sum(v is RepackVerdict.FAIL for v in verdicts_rep)}/200")

unknown = build_apk("com.never.seen", "1.0", stranger)
print(f"\nunknown package verdict: {repack_check(parse_apk(unknown), db).value}")
print("(unknown packages are recorded as unchecked, not guessed)")
