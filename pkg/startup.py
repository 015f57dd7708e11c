#!/usr/bin/env python3
"""
Production startup self-check for geomorph
Loads every bundled fixture, runs the smart-init golden checks and probes /health
"""

import logging
import sys
import time

import numpy as np


def _check_english(pf):
    from exponence import select, smart_init

    c, selection, report = select(pf.phi, smart_init(pf.phi, pf.gold), pf.gold)
    row = c.entries[[cell.label for cell in c.row_labels].index("present 3rd sg")]
    return report.all_correct and np.allclose(row, [1.167, 1.731, 0.615], atol=0.005)


def _check_german_present(pf):
    from exponence import select, smart_init

    _, _, report = select(pf.phi, smart_init(pf.phi, pf.gold), pf.gold)
    return report.correct == 6


def _check_russian(pf):
    from exponence import select, smart_init

    c, selection, report = select(pf.phi, smart_init(pf.phi, pf.gold), pf.gold)
    winning = c.entries.max(axis=1)
    near = np.isclose(winning, 1.225, atol=0.005) | np.isclose(winning, 1.414, atol=0.005)
    return report.all_correct and bool(near.all())


def _check_nuer(pf):
    from rotation_classes import base_configuration, class_of_base

    return class_of_base(base_configuration(pf.classes, pf.phi), pf.phi, pf.classes) == "III"


GOLDEN_CHECKS = {
    "english_weak_verb": _check_english,
    "german_present": _check_german_present,
    "russian_class1": _check_russian,
    "nuer_classes": _check_nuer,
}


def check_fixtures():
    """Parse every bundled fixture and run the golden checks; returns the failures"""
    import paradigm_io

    failures = []
    loaded = {}
    for name in paradigm_io.list_fixtures():
        try:
            loaded[name] = paradigm_io.load(name)
        except Exception as e:
            logging.error(f"Fixture {name} failed to load: {e}")
            failures.append(name)
    for name, check in GOLDEN_CHECKS.items():
        if name not in loaded:
            if name not in failures:
                logging.error(f"Fixture {name} is missing")
                failures.append(name)
            continue
        if check(loaded[name]):
            logging.info(f"Golden check passed: {name}")
        else:
            logging.error(f"Golden check failed: {name}")
            failures.append(name)
    return failures


def main():
    """Main startup function for production deployment"""
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s %(levelname)s %(message)s'
    )

    logging.info("Starting geomorph self-check...")

    try:
        start_time = time.time()
        failures = check_fixtures()
        logging.info(f"Fixture checks finished in {time.time() - start_time:.2f} seconds")
        if failures:
            logging.error(f"Failing fixtures: {', '.join(failures)}")
            return False

        from app import app
        logging.info("Application modules loaded successfully")

        # Test health endpoint
        with app.test_client() as client:
            response = client.get('/health')
            if response.status_code == 200:
                logging.info("Health check endpoint working correctly")
            else:
                logging.error(f"Health check failed: {response.status_code}")
                return False

        logging.info("Self-check completed successfully")
        return True

    except Exception as e:
        logging.error(f"Self-check failed: {e}")
        return False


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
