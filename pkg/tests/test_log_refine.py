# pylint: disable=C0114
# pylint: disable=C0115
# pylint: disable=C0116
from unittest import TestCase
from unittest.mock import Mock
from zrt import refine_function
from zrt.exceptions import SimulationError


class TestLogRefine(TestCase):
    def test_logging_on_refine_function_success(self):
        mock_func = Mock()
        mock_func.side_effect = ["Success"]

        with self.assertLogs("zrt.refine", level="DEBUG") as context:
            _ = refine_function(
                func=mock_func,
                is_refinement_needed=lambda x: x != "Success",
                max_refinement_count=5,
            )

            expected_log = "DEBUG:zrt.refine:Attempt 1/5 (budget 64) returning with: Success"
            self.assertEqual(len(context.output), 1)
            self.assertEqual(context.output[0], expected_log)

    def test_logging_on_refine_function_exception(self):
        mock_func = Mock()
        mock_func.side_effect = [ArithmeticError("Error"), "Success"]

        with self.assertLogs("zrt.refine", level="INFO") as context:
            _ = refine_function(
                func=mock_func,
                is_refinement_needed=lambda x: x != "Success",
                max_refinement_count=5,
            )

            expected_log = (
                "WARNING:zrt.refine:Attempt 1/5 (budget 64) failed: ArithmeticError: Error"
            )
            self.assertEqual(len(context.output), 1)
            self.assertEqual(context.output[0], expected_log)

    def test_logging_on_refine_function_exception_return(self):
        mock_func = Mock()
        mock_func.side_effect = [ArithmeticError("Error")]

        with (
            self.assertLogs("zrt.refine", level="INFO") as context,
            self.assertRaises(ArithmeticError),
        ):
            _ = refine_function(
                func=mock_func,
                is_refinement_needed=lambda x: x != "Success",
                max_refinement_count=1,
            )

        expected_log = (
            "WARNING:zrt.refine:Attempt 1/1 (budget 64) gave up: ArithmeticError: Error"
        )
        self.assertEqual(len(context.output), 1)
        self.assertEqual(context.output[0], expected_log)

    def test_logging_on_chained_failure(self):
        def fail_with_cause(budget: int):
            try:
                raise ValueError(f"nan at budget {budget}")
            except ValueError as e:
                raise SimulationError("path blew up") from e

        with self.assertLogs("zrt.refine", level="DEBUG") as context:
            _ = refine_function(
                func=Mock(side_effect=[ZeroDivisionError("x"), "Success"]),
                is_refinement_needed=lambda x: x != "Success",
                max_refinement_count=2,
            )
            with self.assertRaises(SimulationError):
                _ = refine_function(
                    func=fail_with_cause,
                    is_refinement_needed=lambda x: False,
                    max_refinement_count=1,
                )

        self.assertTrue(
            context.output[0].startswith("DEBUG:zrt.refine:Attempt 1 failed:\nTraceback")
        )
        self.assertEqual(
            context.output[-1],
            "WARNING:zrt.refine:Attempt 1/1 (budget 64) gave up: "
            "SimulationError: path blew up <- ValueError: nan at budget 64",
        )

    def test_logging_on_refine_function_refinement(self):
        mock_func = Mock()
        mock_func.side_effect = ["Coarse", "Success"]

        with self.assertLogs("zrt.refine", level="INFO") as context:
            _ = refine_function(
                func=mock_func,
                is_refinement_needed=lambda x: x != "Success",
                max_refinement_count=5,
                base_budget=8,
            )

            expected_log = "INFO:zrt.refine:Attempt 1/5 (budget 8) needs refinement: Coarse"
            self.assertEqual(len(context.output), 1)
            self.assertEqual(context.output[0], expected_log)

    def test_logging_on_refine_function_unlimited(self):
        mock_func = Mock()
        mock_func.side_effect = ["Coarse", "Success"]

        with self.assertLogs("zrt.refine", level="INFO") as context:
            _ = refine_function(
                func=mock_func,
                is_refinement_needed=lambda x: x != "Success",
                max_refinement_count=None,
            )

            expected_log = "INFO:zrt.refine:Attempt 1/inf (budget 64) needs refinement: Coarse"
            self.assertEqual(context.output[0], expected_log)
