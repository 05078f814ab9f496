"""
Tests for feed and inbox stores.
"""
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from channel.atom import feed_render
from channel.store import (
    FileFeedStore,
    FileInboxStore,
    HttpFeedReader,
    MemoryFeedStore,
    MemoryInboxStore,
    check_endpoint,
    comment_feed_key,
    feed_store_for,
    file_feeds,
    http_feeds,
    inbox_key,
)
from core.exceptions import EndpointUnreachable, StorageFull
from core.messages import make_message


def sample_document(n=1, owner='u1'):
    return feed_render(
        [make_message(owner, 'alice', f'status {i}', i) for i in range(n)],
        owner, 100,
    )


class EndpointTests(SimpleTestCase):

    def test_valid_endpoints(self):
        with tempfile.TemporaryDirectory() as tmp:
            check_endpoint(f'{tmp}/sub/u1.atom', writable=True)
            self.assertTrue(Path(tmp, 'sub').is_dir())
        check_endpoint('mem://u1', writable=True)
        check_endpoint('http://127.0.0.1:8100/u1.atom', writable=False)

    def test_invalid_endpoints(self):
        for endpoint, writable in (
            ('', False),
            ('http://[bad', False),
            ('http://127.0.0.1:8100/u1.atom', True),
            ('ftp://host/x', False),
            ('http:///nohost', False),
        ):
            with self.subTest(endpoint=endpoint):
                with self.assertRaises(EndpointUnreachable):
                    check_endpoint(endpoint, writable)

    def test_store_selection(self):
        private = MemoryFeedStore()

        self.assertIs(feed_store_for('mem://x', private), private)
        self.assertIs(feed_store_for('/tmp/x.atom'), file_feeds)
        self.assertIs(feed_store_for('https://h/x.atom'), http_feeds)

    def test_keys(self):
        self.assertEqual(inbox_key('mem://root/', 'u1'), 'mem://root/u1.inbox')
        self.assertEqual(comment_feed_key('/f/u1.atom', 'n1'),
                         '/f/u1.atom.comments.n1')


class FeedStoreTests(SimpleTestCase):

    def test_memory_versions_increase(self):
        store = MemoryFeedStore()

        first = store.write('mem://u1', sample_document(1))
        second = store.write('mem://u1', sample_document(2))

        self.assertEqual((first.version, second.version), (1, 2))
        self.assertIs(store.read('mem://u1'), second)
        self.assertIsNone(store.read('mem://u2'))

    def test_memory_capacity(self):
        document = sample_document(3)
        store = MemoryFeedStore(max_bytes=document.byte_size)
        store.write('mem://u1', document)

        store.write('mem://u1', document)
        with self.assertRaises(StorageFull):
            store.write('mem://u2', document)

    def test_file_write_replaces_whole_document(self):
        store = FileFeedStore()
        with tempfile.TemporaryDirectory() as tmp:
            key = f'{tmp}/feeds/u1.atom'
            store.write(key, sample_document(5))
            written = store.write(key, sample_document(2))

            read = store.read(key)

            self.assertEqual(len(read.entries), 2)
            self.assertEqual(read.version, written.version)
            self.assertEqual(
                [p.name for p in Path(tmp, 'feeds').iterdir()], ['u1.atom']
            )

    def test_file_read_missing(self):
        with tempfile.TemporaryDirectory() as tmp:
            self.assertIsNone(FileFeedStore().read(f'{tmp}/none.atom'))

    def test_file_read_directory_unreachable(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(EndpointUnreachable):
                FileFeedStore().read(tmp)

    def test_http_reader_is_read_only(self):
        with self.assertRaises(EndpointUnreachable):
            HttpFeedReader().write('http://h/u1.atom', sample_document())


class InboxStoreTests(SimpleTestCase):

    def test_memory_inbox(self):
        store = MemoryInboxStore(capacity=2)
        messages = [make_message('u1', 'alice', str(i), i) for i in range(3)]
        store.deliver('mem://in/u2.inbox', messages[0])
        store.deliver('mem://in/u2.inbox', messages[1])

        with self.assertRaises(StorageFull):
            store.deliver('mem://in/u2.inbox', messages[2])
        self.assertEqual(store.read('mem://in/u2.inbox'), messages[:2])
        self.assertEqual(store.drain('mem://in/u2.inbox'), messages[:2])
        self.assertEqual(store.read('mem://in/u2.inbox'), [])

    def test_file_inbox(self):
        store = FileInboxStore()
        message = make_message('u1', 'alice', 'multi\nline', 1,
                               thread_id='t1')
        with tempfile.TemporaryDirectory() as tmp:
            key = inbox_key(tmp, 'u2')
            store.deliver(key, message)
            store.deliver(key, message)

            self.assertEqual(store.read(key), [message, message])
            self.assertEqual(len(store.drain(key)), 2)
            self.assertEqual(store.read(key), [])
