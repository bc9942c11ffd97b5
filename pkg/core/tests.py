import tempfile
from io import StringIO
from pathlib import Path

from django.core.management.base import OutputWrapper
from django.test import SimpleTestCase
from django.urls import reverse

from core.utils import write_document


class HealthCheckTests(SimpleTestCase):

    def test_health(self):
        response = self.client.get(reverse('core:health_check'))
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.content, b'OK')


class WriteDocumentTests(SimpleTestCase):

    def test_stdout(self):
        buffer = StringIO()
        self.assertIsNone(write_document('a\nb', stdout=OutputWrapper(buffer)))
        self.assertEqual(buffer.getvalue(), 'a\nb')

    def test_file_with_missing_parents(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'tables' / 'crack.dsl'
            self.assertEqual(write_document('x\n', output=str(target)), target)
            self.assertEqual(target.read_text(), 'x\n')
